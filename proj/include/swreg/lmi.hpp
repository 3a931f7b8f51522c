#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "swreg/types.hpp"

namespace swreg {

enum class ConstraintSense { negative_definite, positive_definite };

struct SolveOptions {
    double epsilon = 1e-6;       // strictness margin enforced at verification
    int max_iterations = 50000;  // iteration budget across restarts
    int restarts = 20;
    std::uint64_t seed = 20260809;
    // Restarts run in chunks of this size; each chunk may execute in parallel.
    // 1 is the serial reference path; 0 picks the hardware thread count.
    // The selected solution (lowest feasible restart index) is identical for
    // every chunk size.
    int restart_chunk = 1;
    // After the first feasible point, keep iterating toward deeper margins.
    // A first-feasible point can certify stability with contraction
    // arbitrarily close to 1, which makes downstream decay tests meaningless.
    bool deepen_margins = true;
};

// Feasibility problem over named matrix variables: each constraint is an
// affine symmetric matrix expression required to be negative or positive
// definite with margin epsilon. Expressions are symmetric by construction:
// only congruences of symmetric variables and symmetrized products can be
// added.
class LmiProblem {
  public:
    int add_symmetric(const std::string& name, int n);
    int add_rectangular(const std::string& name, int rows, int cols);

    // Starts a constraint with the given constant term (must be symmetric).
    int add_constraint(ConstraintSense sense, Mat constant);
    // Adds scale * L' X L, X a symmetric variable.
    void add_congruence(int constraint, int var, const Mat& L, double scale = 1.0);
    // Adds scale * (L X R + (L X R)').
    void add_symmetrized_product(int constraint, int var, const Mat& L, const Mat& R,
                                 double scale = 1.0);

    int num_variables() const { return static_cast<int>(vars_.size()); }
    int num_constraints() const { return static_cast<int>(constraints_.size()); }
    int num_unknowns() const { return unknowns_; }

    // Evaluates a constraint expression at the given variable values through
    // the term list (independent of the solver's compiled form).
    Mat evaluate(int constraint, const std::vector<Mat>& values) const;

    struct SolveOutcome {
        bool feasible = false;
        std::vector<Mat> values;       // per declared variable, when feasible
        std::vector<double> margins;   // per constraint: lambda_max (negative
                                       // sense) or lambda_min (positive sense)
        double best_violation = std::numeric_limits<double>::infinity();
        int iterations = 0;
        int restarts_used = 0;
    };

    // Douglas-Rachford splitting between the affine expression set and the
    // product of shifted definite cones (projected by eigenvalue clipping).
    // Every feasible answer is re-verified by a fresh eigenvalue computation
    // through evaluate(); infeasibility is a result, not an exception.
    SolveOutcome solve(const SolveOptions& options = {}) const;

  private:
    struct Var {
        std::string name;
        bool symmetric;
        int rows, cols;
        int offset;  // first scalar unknown
        int count;
    };
    enum class TermKind { congruence, symmetrized_product };
    struct Term {
        TermKind kind;
        int var;
        Mat left, right;
        double scale;
    };
    struct Constraint {
        int dim;
        ConstraintSense sense;
        Mat constant;
        std::vector<Term> terms;
    };

    Mat basis_matrix(const Var& v, int local_index) const;
    std::vector<Mat> unpack(const Vec& x) const;

    std::vector<Var> vars_;
    std::vector<Constraint> constraints_;
    int unknowns_ = 0;
};

// Symmetric matrix plus verified definiteness margins proving quadratic
// stability of a mode family under arbitrary switching.
struct LyapunovCertificate {
    Mat Q;
    double epsilon = 0.0;
    double lambda_min_Q = 0.0;
    std::vector<double> margins;  // lambda_max(A_i' Q A_i - Q) per mode
};

struct VerifyOutcome {
    bool accepted = false;
    LyapunovCertificate certificate;
    std::string reason;
};

// Accepts iff lambda_min(Q) > eps and lambda_max(A_i' Q A_i - Q) < -eps for
// every mode; all margins are recorded either way. Q with relative asymmetry
// above 1e-9 is an input error.
VerifyOutcome verify_common_lyapunov(const Mat& Q, const std::vector<Mat>& A_list,
                                     double eps = 0.0);

struct AnalysisResult {
    bool feasible = false;
    LyapunovCertificate certificate;
    double best_violation = 0.0;
    int iterations = 0;
};

// Finds a common Q > 0 with A_i' Q A_i - Q < 0 for all modes.
AnalysisResult solve_common_lyapunov(const std::vector<Mat>& A_list,
                                     const SolveOptions& options = {});

struct OutputInjectionResult {
    bool feasible = false;
    Mat P;
    std::vector<Mat> G;
    LyapunovCertificate certificate;  // for the closed loops Ae_i + G_i Ce_i
    double best_violation = 0.0;
    int iterations = 0;
};

// Schur-complement linearization in (P, W_i):
//   [ -P              Ae_i' P + Ce_i' W_i' ]
//   [ P Ae_i + W_i Ce_i        -P          ]  < -eps I,   G_i = P^{-1} W_i.
// modes are (Ae_i, Ce_i) pairs.
OutputInjectionResult synth_output_injection(const std::vector<std::pair<Mat, Mat>>& modes,
                                             const SolveOptions& options = {});

struct StateFeedbackResult {
    bool feasible = false;
    Mat S;
    std::vector<Mat> F;
    LyapunovCertificate certificate;  // on S^{-1} for the closed loops A_i + B_i F_i
    double best_violation = 0.0;
    int iterations = 0;
};

// Dual form in (S, M_i):
//   [ -S              S A_i' + M_i' B_i' ]
//   [ A_i S + B_i M_i        -S          ]  < -eps I,   F_i = M_i S^{-1}.
// modes are (A_i, B_i) pairs.
StateFeedbackResult synth_state_feedback(const std::vector<std::pair<Mat, Mat>>& modes,
                                         const SolveOptions& options = {});

// Largest eigenvalue magnitude (general square matrix).
double spectral_radius(const Mat& A);

}  // namespace swreg
