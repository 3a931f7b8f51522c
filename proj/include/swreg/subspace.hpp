#pragma once

#include "swreg/types.hpp"

namespace swreg {

// Relative singular-value cutoff used for every rank decision: singular values
// below rel_tol * sigma_max are treated as zero.
struct RankPolicy {
    double rel_tol = 1e-9;
};

// A linear subspace of R^n stored as an ambient dimension plus a matrix with
// orthonormal columns. The zero subspace is an n-by-0 basis, not an error.
class Subspace {
  public:
    // Orthonormalizes the span of the given columns (rank-revealing).
    explicit Subspace(const Mat& span, const RankPolicy& policy = {});

    static Subspace zero(int ambient_dim);
    static Subspace full(int ambient_dim);

    int ambient_dim() const { return ambient_dim_; }
    int dim() const { return static_cast<int>(basis_.cols()); }
    const Mat& basis() const { return basis_; }

    // Max deviation of basis' * basis from the identity.
    double orthonormality_defect() const;

  private:
    struct Trusted {};
    Subspace(int ambient_dim, Mat orthonormal_basis, Trusted);

    int ambient_dim_;
    Mat basis_;

    friend Subspace image(const Mat&, const RankPolicy&);
    friend Subspace kernel(const Mat&, const RankPolicy&);
};

// Column span of M. M must have at least one row; an n-by-0 M gives the zero
// subspace.
Subspace image(const Mat& M, const RankPolicy& policy = {});

// Null space {x : Mx = 0}. M must have at least one column; a 0-by-n M gives
// the full space.
Subspace kernel(const Mat& M, const RankPolicy& policy = {});

// Orthogonal complement within the ambient space.
Subspace complement(const Subspace& U, const RankPolicy& policy = {});

Subspace sum(const Subspace& U, const Subspace& V, const RankPolicy& policy = {});

// Computed via complements: U ∩ V = (U⊥ + V⊥)⊥.
Subspace intersect(const Subspace& U, const Subspace& V, const RankPolicy& policy = {});

// {x : Ax ∈ V}; A maps R^cols(A) into V's ambient space.
Subspace preimage(const Mat& A, const Subspace& V, const RankPolicy& policy = {});

// Gap metric: sine of the largest principal angle, computed stably as the
// spectral norm of the projection residual. Subspaces of unequal dimension
// are at distance 1 by convention, so monotone algorithms can compare freely.
double distance(const Subspace& U, const Subspace& V);

// True iff every basis vector of V has projection residual onto U at most tol.
bool contains(const Subspace& U, const Subspace& V, double tol);

}  // namespace swreg
