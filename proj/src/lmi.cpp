#include "swreg/lmi.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace swreg {

namespace {

Mat symmetrize(const Mat& M) { return 0.5 * (M + M.transpose()); }

double relative_asymmetry(const Mat& M) {
    const double scale = std::max(1e-300, M.cwiseAbs().maxCoeff());
    return (M - M.transpose()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

double spectral_radius(const Mat& A) {
    require(A.rows() == A.cols() && A.rows() >= 1, "spectral_radius: square matrix required");
    Eigen::EigenSolver<Mat> es(A, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

int LmiProblem::add_symmetric(const std::string& name, int n) {
    require(n >= 1, "add_symmetric: dimension must be positive");
    Var v{name, true, n, n, unknowns_, n * (n + 1) / 2};
    unknowns_ += v.count;
    vars_.push_back(std::move(v));
    return num_variables() - 1;
}

int LmiProblem::add_rectangular(const std::string& name, int rows, int cols) {
    require(rows >= 1 && cols >= 1, "add_rectangular: dimensions must be positive");
    Var v{name, false, rows, cols, unknowns_, rows * cols};
    unknowns_ += v.count;
    vars_.push_back(std::move(v));
    return num_variables() - 1;
}

int LmiProblem::add_constraint(ConstraintSense sense, Mat constant) {
    require(constant.rows() == constant.cols() && constant.rows() >= 1,
            "add_constraint: constant term must be square");
    require(relative_asymmetry(constant) <= 1e-12 || constant.isZero(0.0),
            "add_constraint: constant term must be symmetric");
    constraints_.push_back({static_cast<int>(constant.rows()), sense,
                            std::move(constant), {}});
    return num_constraints() - 1;
}

void LmiProblem::add_congruence(int constraint, int var, const Mat& L, double scale) {
    require(constraint >= 0 && constraint < num_constraints(), "add_congruence: bad constraint id");
    require(var >= 0 && var < num_variables(), "add_congruence: bad variable id");
    const Var& v = vars_[var];
    Constraint& c = constraints_[constraint];
    require(v.symmetric, "add_congruence: variable must be symmetric");
    require(L.rows() == v.rows && L.cols() == c.dim,
            "add_congruence: L must be (var dim) x (constraint dim)");
    c.terms.push_back({TermKind::congruence, var, L, Mat(), scale});
}

void LmiProblem::add_symmetrized_product(int constraint, int var, const Mat& L,
                                         const Mat& R, double scale) {
    require(constraint >= 0 && constraint < num_constraints(),
            "add_symmetrized_product: bad constraint id");
    require(var >= 0 && var < num_variables(), "add_symmetrized_product: bad variable id");
    const Var& v = vars_[var];
    Constraint& c = constraints_[constraint];
    require(L.rows() == c.dim && L.cols() == v.rows,
            "add_symmetrized_product: L must be (constraint dim) x (var rows)");
    require(R.rows() == v.cols && R.cols() == c.dim,
            "add_symmetrized_product: R must be (var cols) x (constraint dim)");
    c.terms.push_back({TermKind::symmetrized_product, var, L, R, scale});
}

Mat LmiProblem::basis_matrix(const Var& v, int local_index) const {
    Mat E = Mat::Zero(v.rows, v.cols);
    if (v.symmetric) {
        int k = 0;
        for (int a = 0; a < v.rows; ++a)
            for (int b = a; b < v.cols; ++b) {
                if (k == local_index) {
                    E(a, b) = 1.0;
                    E(b, a) = 1.0;
                    return E;
                }
                ++k;
            }
    } else {
        E(local_index % v.rows, local_index / v.rows) = 1.0;
        return E;
    }
    throw InputError("basis_matrix: index out of range");
}

std::vector<Mat> LmiProblem::unpack(const Vec& x) const {
    std::vector<Mat> out;
    out.reserve(vars_.size());
    for (const Var& v : vars_) {
        Mat M(v.rows, v.cols);
        if (v.symmetric) {
            int k = v.offset;
            for (int a = 0; a < v.rows; ++a)
                for (int b = a; b < v.cols; ++b) {
                    M(a, b) = x(k);
                    M(b, a) = x(k);
                    ++k;
                }
        } else {
            for (int j = 0; j < v.count; ++j)
                M(j % v.rows, j / v.rows) = x(v.offset + j);
        }
        out.push_back(std::move(M));
    }
    return out;
}

Mat LmiProblem::evaluate(int constraint, const std::vector<Mat>& values) const {
    require(constraint >= 0 && constraint < num_constraints(), "evaluate: bad constraint id");
    require(static_cast<int>(values.size()) == num_variables(),
            "evaluate: one value per declared variable required");
    const Constraint& c = constraints_[constraint];
    Mat E = c.constant;
    for (const Term& t : c.terms) {
        const Mat& X = values[t.var];
        if (t.kind == TermKind::congruence) {
            E += t.scale * (t.left.transpose() * X * t.left);
        } else {
            Mat M = t.scale * (t.left * X * t.right);
            E += M + M.transpose();
        }
    }
    return E;
}

namespace {

struct Compiled {
    Mat G;   // stacked vec(E_c) coefficients, one column per scalar unknown
    Vec f0;  // stacked vec of constant terms
    std::vector<int> row_offset;
    bool homogeneous = false;
};

struct ConstraintMeta {
    int dim;
    ConstraintSense sense;
};

// Margin magnitude of one evaluated constraint; positive when satisfied
// strictly: -lambda_max for negative sense, lambda_min for positive.
double constraint_margin(const Mat& E, ConstraintSense sense) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(symmetrize(E), Eigen::EigenvaluesOnly);
    if (sense == ConstraintSense::negative_definite)
        return -eig.eigenvalues().maxCoeff();
    return eig.eigenvalues().minCoeff();
}

// Worst violation of the stacked evaluation vector against a required margin.
double stacked_violation(const Vec& e, const Compiled& cp,
                         const std::vector<ConstraintMeta>& meta, double margin) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < meta.size(); ++c) {
        Eigen::Map<const Mat> E(e.data() + cp.row_offset[c], meta[c].dim, meta[c].dim);
        worst = std::max(worst, margin - constraint_margin(E, meta[c].sense));
    }
    return worst;
}

// Projection onto the product of shifted definite cones by eigenvalue clipping.
Vec clip_onto_cones(const Vec& z, const Compiled& cp,
                    const std::vector<ConstraintMeta>& meta, double margin) {
    Vec out(z.size());
    for (std::size_t c = 0; c < meta.size(); ++c) {
        const int d = meta[c].dim;
        Eigen::Map<const Mat> Z(z.data() + cp.row_offset[c], d, d);
        Eigen::SelfAdjointEigenSolver<Mat> eig(symmetrize(Z));
        Vec lam = eig.eigenvalues();
        if (meta[c].sense == ConstraintSense::negative_definite)
            lam = lam.cwiseMin(-margin);
        else
            lam = lam.cwiseMax(margin);
        Mat P = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
        Eigen::Map<Mat>(out.data() + cp.row_offset[c], d, d) = P;
    }
    return out;
}

struct DrResult {
    bool ok = false;
    Vec x;
    double best_violation = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

// Douglas-Rachford in the stacked constraint space. accept_margin is the
// verified target; the cones are shifted slightly deeper so the iterates cross
// the acceptance threshold instead of approaching it asymptotically.
DrResult run_dr(const Compiled& cp,
                const Eigen::CompleteOrthogonalDecomposition<Mat>& cod,
                const std::vector<ConstraintMeta>& meta, Vec z, double accept_margin,
                int budget) {
    const double clip = 2.0 * accept_margin;
    DrResult res;
    int stall = 0;
    for (int it = 0; it < budget; ++it) {
        Vec x = cod.solve(z - cp.f0);
        Vec e = cp.G * x + cp.f0;  // projection of z onto the affine set
        const double viol = stacked_violation(e, cp, meta, accept_margin);
        res.iterations = it + 1;
        // progress must be meaningful relative to the plateau level, or an
        // infeasible problem creeps its way through the entire budget
        const double significant =
            std::max(1e-15, 1e-3 * std::abs(res.best_violation));
        if (viol < res.best_violation - significant)
            stall = 0;
        else if (++stall > 250) {
            res.best_violation = std::min(res.best_violation, viol);
            return res;
        }
        res.best_violation = std::min(res.best_violation, viol);
        if (viol <= 0.0) {
            res.ok = true;
            res.x = std::move(x);
            return res;
        }
        Vec reflected = 2.0 * e - z;
        z += clip_onto_cones(reflected, cp, meta, clip) - e;
    }
    return res;
}

}  // namespace

LmiProblem::SolveOutcome LmiProblem::solve(const SolveOptions& options) const {
    require(num_constraints() >= 1, "solve: problem has no constraints");
    require(num_unknowns() >= 1, "solve: problem has no variables");
    require(options.epsilon > 0.0, "solve: epsilon must be positive");

    // Compile to canonical form: E_c(x) = F0_c + sum_j x_j F_{c,j}.
    Compiled cp;
    std::vector<ConstraintMeta> meta;
    int rows = 0;
    for (const Constraint& c : constraints_) {
        cp.row_offset.push_back(rows);
        meta.push_back({c.dim, c.sense});
        rows += c.dim * c.dim;
    }
    cp.G = Mat::Zero(rows, unknowns_);
    cp.f0 = Vec::Zero(rows);
    for (int ci = 0; ci < num_constraints(); ++ci) {
        const Constraint& c = constraints_[ci];
        Eigen::Map<Mat>(cp.f0.data() + cp.row_offset[ci], c.dim, c.dim) = c.constant;
        for (const Term& t : c.terms) {
            const Var& v = vars_[t.var];
            for (int j = 0; j < v.count; ++j) {
                Mat E = basis_matrix(v, j);
                Mat M;
                if (t.kind == TermKind::congruence) {
                    M = t.scale * (t.left.transpose() * E * t.left);
                } else {
                    M = t.scale * (t.left * E * t.right);
                    M = M + M.transpose().eval();
                }
                cp.G.block(cp.row_offset[ci], v.offset + j, c.dim * c.dim, 1) +=
                    Eigen::Map<Vec>(M.data(), c.dim * c.dim);
            }
        }
    }
    cp.homogeneous = cp.f0.isZero(0.0);
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(cp.G);

    auto initial_point = [&](int restart) {
        Vec x0 = Vec::Zero(unknowns_);
        if (restart == 0) {
            for (const Var& v : vars_)
                if (v.symmetric) {
                    int k = v.offset;
                    for (int a = 0; a < v.rows; ++a)
                        for (int b = a; b < v.cols; ++b) {
                            if (a == b)
                                x0(k) = 1.0;
                            ++k;
                        }
                }
        } else {
            std::mt19937_64 rng(options.seed +
                                0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(restart));
            std::uniform_real_distribution<double> uni(-1.0, 1.0);
            for (int k = 0; k < unknowns_; ++k)
                x0(k) = uni(rng);
        }
        return x0;
    };

    const int restarts = std::max(1, options.restarts);
    const int per_restart = std::max(100, options.max_iterations / restarts);
    int chunk = options.restart_chunk;
    if (chunk <= 0) {
#ifdef _OPENMP
        chunk = std::max(1, omp_get_max_threads());
#else
        chunk = 1;
#endif
    }

    SolveOutcome out;
    bool found = false;
    bool concluded_infeasible = false;
    Vec x;
    std::vector<double> plateau;  // best violation per considered restart
    int computed_until = 0;
    while (out.restarts_used < restarts && !found && !concluded_infeasible) {
        const int chunk_end = std::min(restarts, computed_until + chunk);
        const int cnt = chunk_end - computed_until;
        std::vector<DrResult> results(cnt);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (cnt > 1)
#endif
        for (int k = 0; k < cnt; ++k) {
            Vec x0 = initial_point(computed_until + k);
            results[k] = run_dr(cp, cod, meta, cp.G * x0 + cp.f0, options.epsilon,
                                per_restart);
        }
        computed_until = chunk_end;
        // Consider results strictly in restart order; the early-out rules
        // fire at fixed restart indices, so the outcome does not depend on
        // the chunk size (extra chunk work is discarded, never consulted).
        for (int k = 0; k < cnt && !found && !concluded_infeasible; ++k) {
            out.iterations += results[k].iterations;
            out.best_violation = std::min(out.best_violation, results[k].best_violation);
            ++out.restarts_used;
            if (results[k].ok) {
                found = true;
                x = std::move(results[k].x);
                break;
            }
            plateau.push_back(results[k].best_violation);
            if (plateau.size() >= 4) {
                // four failed restarts stuck on the same violation plateau:
                // further random initializations will not help
                const auto [lo, hi] = std::minmax_element(plateau.end() - 4,
                                                          plateau.end());
                if (*lo > 0.0 && *hi <= 2.5 * *lo)
                    concluded_infeasible = true;
            }
        }
    }

    if (found && options.deepen_margins) {
        // Re-target the cones at progressively deeper margins and keep the
        // deepest point that still verifies. For homogeneous problems the
        // iterate is renormalized first: margins scale linearly with the
        // variables there, so only scale-relative depth is meaningful.
        const int per_phase = std::max(400, options.max_iterations / 60);
        for (int phase = 0; phase < 12; ++phase) {
            if (cp.homogeneous) {
                Vec e = cp.G * x + cp.f0;
                double scale = 0.0;
                for (std::size_t c = 0; c < meta.size(); ++c) {
                    Eigen::Map<const Mat> E(e.data() + cp.row_offset[c], meta[c].dim,
                                            meta[c].dim);
                    scale = std::max(scale, E.cwiseAbs().maxCoeff());
                }
                if (scale > 0.0)
                    x /= scale;
            }
            Vec e = cp.G * x + cp.f0;
            double min_margin = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < meta.size(); ++c) {
                Eigen::Map<const Mat> E(e.data() + cp.row_offset[c], meta[c].dim,
                                        meta[c].dim);
                min_margin = std::min(min_margin, constraint_margin(E, meta[c].sense));
            }
            const double target = std::max(2.0 * options.epsilon, 4.0 * min_margin);
            DrResult deeper = run_dr(cp, cod, meta, e, target, per_phase);
            out.iterations += deeper.iterations;
            if (!deeper.ok)
                break;
            x = std::move(deeper.x);
        }
        if (cp.homogeneous) {
            // Leave the certificate at a scale where margins clear epsilon.
            Vec e = cp.G * x + cp.f0;
            double min_margin = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < meta.size(); ++c) {
                Eigen::Map<const Mat> E(e.data() + cp.row_offset[c], meta[c].dim,
                                        meta[c].dim);
                min_margin = std::min(min_margin, constraint_margin(E, meta[c].sense));
            }
            if (min_margin > 0.0 && min_margin < 2.0 * options.epsilon)
                x *= 2.0 * options.epsilon / min_margin;
        }
    }

    if (!found)
        return out;

    // Mandatory verification, independent of the compiled solver path.
    out.values = unpack(x);
    out.margins.resize(num_constraints());
    bool verified = true;
    for (int c = 0; c < num_constraints(); ++c) {
        Mat E = evaluate(c, out.values);
        Eigen::SelfAdjointEigenSolver<Mat> eig(symmetrize(E), Eigen::EigenvaluesOnly);
        if (constraints_[c].sense == ConstraintSense::negative_definite) {
            out.margins[c] = eig.eigenvalues().maxCoeff();
            verified = verified && out.margins[c] <= -options.epsilon;
        } else {
            out.margins[c] = eig.eigenvalues().minCoeff();
            verified = verified && out.margins[c] >= options.epsilon;
        }
    }
    out.feasible = verified;
    if (verified)
        out.best_violation = 0.0;
    else
        out.values.clear();
    return out;
}

VerifyOutcome verify_common_lyapunov(const Mat& Q, const std::vector<Mat>& A_list,
                                     double eps) {
    require(Q.rows() == Q.cols() && Q.rows() >= 1, "verify_common_lyapunov: Q must be square");
    require(relative_asymmetry(Q) <= 1e-9,
            "verify_common_lyapunov: Q is not symmetric (relative asymmetry > 1e-9)");
    require(!A_list.empty(), "verify_common_lyapunov: empty mode list");
    for (const Mat& A : A_list)
        require(A.rows() == Q.rows() && A.cols() == Q.cols(),
                "verify_common_lyapunov: size mismatch between Q and a mode matrix");

    VerifyOutcome out;
    LyapunovCertificate& cert = out.certificate;
    cert.Q = symmetrize(Q);
    cert.epsilon = eps;
    Eigen::SelfAdjointEigenSolver<Mat> eq(cert.Q, Eigen::EigenvaluesOnly);
    cert.lambda_min_Q = eq.eigenvalues().minCoeff();
    out.accepted = cert.lambda_min_Q > eps;
    if (!out.accepted)
        out.reason = "Q is not positive-definite with the required margin";
    for (const Mat& A : A_list) {
        Mat E = A.transpose() * cert.Q * A - cert.Q;
        Eigen::SelfAdjointEigenSolver<Mat> eig(symmetrize(E), Eigen::EigenvaluesOnly);
        const double margin = eig.eigenvalues().maxCoeff();
        cert.margins.push_back(margin);
        if (!(margin < -eps)) {
            out.accepted = false;
            if (out.reason.empty())
                out.reason = "A' Q A - Q is not negative-definite for mode " +
                             std::to_string(cert.margins.size());
        }
    }
    return out;
}

AnalysisResult solve_common_lyapunov(const std::vector<Mat>& A_list,
                                     const SolveOptions& options) {
    require(!A_list.empty(), "solve_common_lyapunov: empty mode list");
    const int n = static_cast<int>(A_list[0].rows());
    for (const Mat& A : A_list)
        require(A.rows() == n && A.cols() == n,
                "solve_common_lyapunov: modes must be square and equally sized");

    LmiProblem pb;
    const int q = pb.add_symmetric("Q", n);
    const int positivity = pb.add_constraint(ConstraintSense::positive_definite,
                                             Mat::Zero(n, n));
    pb.add_congruence(positivity, q, Mat::Identity(n, n));
    for (const Mat& A : A_list) {
        const int c = pb.add_constraint(ConstraintSense::negative_definite, Mat::Zero(n, n));
        pb.add_congruence(c, q, A);
        pb.add_congruence(c, q, Mat::Identity(n, n), -1.0);
    }

    auto sol = pb.solve(options);
    AnalysisResult res;
    res.best_violation = sol.best_violation;
    res.iterations = sol.iterations;
    if (!sol.feasible)
        return res;
    auto verify = verify_common_lyapunov(sol.values[q], A_list, options.epsilon);
    res.feasible = verify.accepted;
    res.certificate = std::move(verify.certificate);
    return res;
}

OutputInjectionResult synth_output_injection(const std::vector<std::pair<Mat, Mat>>& modes,
                                             const SolveOptions& options) {
    require(!modes.empty(), "synth_output_injection: empty mode list");
    const int n = static_cast<int>(modes[0].first.rows());
    const int p = static_cast<int>(modes[0].second.rows());
    for (const auto& [Ae, Ce] : modes) {
        require(Ae.rows() == n && Ae.cols() == n,
                "synth_output_injection: Ae must be square and equally sized across modes");
        require(Ce.rows() == p && Ce.cols() == n,
                "synth_output_injection: Ce size mismatch");
    }

    // Solving with (Ae, Ce)/rho asks for the contraction
    // (Ae + G Ce)' P (Ae + G Ce) <= rho^2 P, which implies the rho = 1
    // post-condition with margin to spare.
    auto attempt = [&](double rho) {
        LmiProblem pb;
        const int pvar = pb.add_symmetric("P", n);
        std::vector<int> wvars;
        for (std::size_t i = 0; i < modes.size(); ++i)
            wvars.push_back(pb.add_rectangular("W" + std::to_string(i + 1), n, p));

        Mat U1 = Mat::Zero(2 * n, n);
        U1.topRows(n) = Mat::Identity(n, n);
        Mat U2 = Mat::Zero(2 * n, n);
        U2.bottomRows(n) = Mat::Identity(n, n);
        for (std::size_t i = 0; i < modes.size(); ++i) {
            const Mat Ae = modes[i].first / rho;
            const Mat Ce = modes[i].second / rho;
            const int c = pb.add_constraint(ConstraintSense::negative_definite,
                                            Mat::Zero(2 * n, 2 * n));
            pb.add_congruence(c, pvar, U1.transpose(), -1.0);
            pb.add_congruence(c, pvar, U2.transpose(), -1.0);
            pb.add_symmetrized_product(c, pvar, U2, Ae * U1.transpose());
            pb.add_symmetrized_product(c, wvars[i], U2, Ce * U1.transpose());
        }
        auto sol = pb.solve(options);
        if (sol.feasible) {
            Mat P = sol.values[pvar];
            std::vector<Mat> W;
            for (std::size_t i = 0; i < modes.size(); ++i)
                W.push_back(sol.values[wvars[i]]);
            return std::tuple(std::move(sol), std::move(P), std::move(W));
        }
        return std::tuple(std::move(sol), Mat(), std::vector<Mat>());
    };

    OutputInjectionResult res;
    auto [sol, P, W] = attempt(1.0);
    res.best_violation = sol.best_violation;
    res.iterations = sol.iterations;
    if (!sol.feasible)
        return res;

    // Refine toward faster decay; keep the tightest feasible target. A
    // first-feasible injection can park closed-loop modes near the unit
    // circle, which starves downstream convergence.
    for (double rho : {0.95, 0.9, 0.85}) {
        auto [rsol, rP, rW] = attempt(rho);
        res.iterations += rsol.iterations;
        if (!rsol.feasible)
            break;
        P = std::move(rP);
        W = std::move(rW);
    }

    res.P = std::move(P);
    std::vector<Mat> closed;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        Mat G = res.P.ldlt().solve(W[i]);
        closed.push_back(modes[i].first + G * modes[i].second);
        res.G.push_back(std::move(G));
    }
    auto verify = verify_common_lyapunov(res.P, closed, 0.0);
    res.feasible = verify.accepted;
    res.certificate = std::move(verify.certificate);
    return res;
}

StateFeedbackResult synth_state_feedback(const std::vector<std::pair<Mat, Mat>>& modes,
                                         const SolveOptions& options) {
    require(!modes.empty(), "synth_state_feedback: empty mode list");
    const int n = static_cast<int>(modes[0].first.rows());
    const int m = static_cast<int>(modes[0].second.cols());
    for (const auto& [A, B] : modes) {
        require(A.rows() == n && A.cols() == n,
                "synth_state_feedback: A must be square and equally sized across modes");
        require(B.rows() == n && B.cols() == m, "synth_state_feedback: B size mismatch");
    }

    LmiProblem pb;
    const int svar = pb.add_symmetric("S", n);
    std::vector<int> mvars;
    for (std::size_t i = 0; i < modes.size(); ++i)
        mvars.push_back(pb.add_rectangular("M" + std::to_string(i + 1), m, n));

    Mat U1 = Mat::Zero(2 * n, n);
    U1.topRows(n) = Mat::Identity(n, n);
    Mat U2 = Mat::Zero(2 * n, n);
    U2.bottomRows(n) = Mat::Identity(n, n);
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto& [A, B] = modes[i];
        const int c = pb.add_constraint(ConstraintSense::negative_definite,
                                        Mat::Zero(2 * n, 2 * n));
        pb.add_congruence(c, svar, U1.transpose(), -1.0);
        pb.add_congruence(c, svar, U2.transpose(), -1.0);
        pb.add_symmetrized_product(c, svar, U2 * A, U1.transpose());
        pb.add_symmetrized_product(c, mvars[i], U2 * B, U1.transpose());
    }

    auto sol = pb.solve(options);
    StateFeedbackResult res;
    res.best_violation = sol.best_violation;
    res.iterations = sol.iterations;
    if (!sol.feasible)
        return res;

    res.S = sol.values[svar];
    Mat S_inv = res.S.ldlt().solve(Mat::Identity(n, n));
    S_inv = symmetrize(S_inv);
    std::vector<Mat> closed;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        // F = M S^{-1}, solved as S F' = M'.
        Mat F = res.S.ldlt().solve(sol.values[mvars[i]].transpose()).transpose();
        closed.push_back(modes[i].first + modes[i].second * F);
        res.F.push_back(std::move(F));
    }
    auto verify = verify_common_lyapunov(S_inv, closed, 0.0);
    res.feasible = verify.accepted;
    res.certificate = std::move(verify.certificate);
    return res;
}

}  // namespace swreg
