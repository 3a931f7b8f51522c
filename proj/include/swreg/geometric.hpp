#pragma once

#include <vector>

#include "swreg/subspace.hpp"
#include "swreg/system_model.hpp"
#include "swreg/types.hpp"

namespace swreg {

struct VstarOptions {
    RankPolicy rank_policy;
    // Start the recursion from the full space instead of the kernel
    // intersection (used by the maximality probe; same fixed point).
    bool start_from_full = false;
};

struct VstarResult {
    Subspace subspace;
    std::vector<int> dim_history;  // dimension after each sweep, non-increasing
};

// Maximal robust controlled invariant subspace contained in every ker Ce_i:
// V_0 = ∩_i ker Ce_i,  V_{k+1} = V_0 ∩ ∩_i Ae_i^{-1}(V_k + Im Be_i),
// stopping at the first sweep that leaves the dimension unchanged.
VstarResult max_robust_controlled_invariant(const ExtendedSystem& sys,
                                            const VstarOptions& options = {});

// Condition (i): Vstar + Im[I_n; 0] covers the whole extended space.
bool check_condition_i(const Subspace& vstar, int plant_dim,
                       const RankPolicy& policy = {});

// Solution of the switching Francis equations
//   A_i Pi + B_i Gamma_i = Pi Ag_i,   C_i Pi = Eg_i   for every mode,
// solved jointly as one stacked least-squares system (minimum-norm solution
// when under-determined). solvable is true iff the scaled residual is within
// tolerance; Im[Pi; I] is then a robust controlled invariant inside every
// ker Ce_i by construction.
struct FrancisSolution {
    bool solvable = false;
    Mat Pi;                  // n x q
    std::vector<Mat> Gamma;  // m x q per mode
    double residual = 0.0;   // max-abs residual after row scaling
};

FrancisSolution solve_francis(const SwitchingPlant& plant, const Exosystem& exo,
                              double tol = 1e-8);

// Per-mode factors of the invariance equation Ae_i V = V X_i + Be_i W_i.
// Any F with F V = -W_i is then a friend of V for mode i.
struct InvarianceFactors {
    bool ok = false;
    int failed_mode = 0;  // 1-based, when !ok
    std::vector<Mat> X;
    std::vector<Mat> W;
    std::vector<double> residuals;
};

InvarianceFactors friend_of(const ExtendedSystem& sys, const Subspace& V,
                            double tol = 1e-8);

struct FriendSet {
    Subspace V = Subspace::zero(1);
    std::vector<Mat> F;              // m x (n+q) per mode
    std::vector<double> residuals;   // per-mode invariance residual of V under Ae+Be F
};

// F_i = [F1_i, Gamma_i - F1_i Pi]: friendship F_i [Pi; I] = Gamma_i holds
// identically and the closed-loop plant block of Ae_i + Be_i F_i equals
// A_i + B_i F1_i, so stability of the free part is delegated entirely to F1.
FriendSet assemble_friend_feedback(const ExtendedSystem& sys,
                                   const FrancisSolution& francis,
                                   const std::vector<Mat>& F1_list);

}  // namespace swreg
