#include "swreg/subspace.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace swreg {

namespace {

void check_policy(const RankPolicy& policy) {
    require(policy.rel_tol > 0.0 && policy.rel_tol < 1.0,
            "RankPolicy: rel_tol must lie in (0, 1)");
}

int rank_from_singular_values(const Vec& s, double rel_tol) {
    if (s.size() == 0 || s(0) <= 0.0)
        return 0;
    const double cut = rel_tol * s(0);
    int r = 0;
    while (r < s.size() && s(r) > cut)
        ++r;
    return r;
}

}  // namespace

Subspace::Subspace(int ambient_dim, Mat orthonormal_basis, Trusted)
    : ambient_dim_(ambient_dim), basis_(std::move(orthonormal_basis)) {}

Subspace::Subspace(const Mat& span, const RankPolicy& policy) {
    Subspace s = image(span, policy);
    ambient_dim_ = s.ambient_dim_;
    basis_ = std::move(s.basis_);
}

Subspace Subspace::zero(int ambient_dim) {
    require(ambient_dim >= 1, "Subspace: ambient dimension must be positive");
    return Subspace(ambient_dim, Mat(ambient_dim, 0), Trusted{});
}

Subspace Subspace::full(int ambient_dim) {
    require(ambient_dim >= 1, "Subspace: ambient dimension must be positive");
    return Subspace(ambient_dim, Mat::Identity(ambient_dim, ambient_dim), Trusted{});
}

double Subspace::orthonormality_defect() const {
    if (dim() == 0)
        return 0.0;
    Mat G = basis_.transpose() * basis_;
    return (G - Mat::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

Subspace image(const Mat& M, const RankPolicy& policy) {
    check_policy(policy);
    require(M.rows() >= 1, "image: matrix must have at least one row");
    const int amb = static_cast<int>(M.rows());
    if (M.cols() == 0)
        return Subspace::zero(amb);
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU);
    const int r = rank_from_singular_values(svd.singularValues(), policy.rel_tol);
    return Subspace(amb, svd.matrixU().leftCols(r), Subspace::Trusted{});
}

Subspace kernel(const Mat& M, const RankPolicy& policy) {
    check_policy(policy);
    require(M.cols() >= 1, "kernel: matrix must have at least one column");
    const int amb = static_cast<int>(M.cols());
    if (M.rows() == 0)
        return Subspace::full(amb);
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
    const int r = rank_from_singular_values(svd.singularValues(), policy.rel_tol);
    return Subspace(amb, svd.matrixV().rightCols(amb - r), Subspace::Trusted{});
}

Subspace complement(const Subspace& U, const RankPolicy& policy) {
    if (U.dim() == 0)
        return Subspace::full(U.ambient_dim());
    return kernel(U.basis().transpose(), policy);
}

Subspace sum(const Subspace& U, const Subspace& V, const RankPolicy& policy) {
    require(U.ambient_dim() == V.ambient_dim(),
            "sum: ambient dimensions differ");
    if (U.dim() + V.dim() == 0)
        return Subspace::zero(U.ambient_dim());
    Mat stacked(U.ambient_dim(), U.dim() + V.dim());
    stacked << U.basis(), V.basis();
    return image(stacked, policy);
}

Subspace intersect(const Subspace& U, const Subspace& V, const RankPolicy& policy) {
    require(U.ambient_dim() == V.ambient_dim(),
            "intersect: ambient dimensions differ");
    return complement(sum(complement(U, policy), complement(V, policy), policy), policy);
}

Subspace preimage(const Mat& A, const Subspace& V, const RankPolicy& policy) {
    require(A.rows() == V.ambient_dim(),
            "preimage: row count of A must match V's ambient dimension");
    require(A.cols() >= 1, "preimage: A must have at least one column");
    const int domain = static_cast<int>(A.cols());
    Subspace perp = complement(V, policy);
    if (perp.dim() == 0)
        return Subspace::full(domain);
    // Ax ∈ V iff A x is orthogonal to every direction of V⊥.
    return kernel(perp.basis().transpose() * A, policy);
}

double distance(const Subspace& U, const Subspace& V) {
    require(U.ambient_dim() == V.ambient_dim(),
            "distance: ambient dimensions differ");
    if (U.dim() != V.dim())
        return 1.0;
    if (U.dim() == 0)
        return 0.0;
    auto residual_norm = [](const Subspace& A, const Subspace& B) {
        Mat R = B.basis() - A.basis() * (A.basis().transpose() * B.basis());
        Eigen::JacobiSVD<Mat> svd(R);
        return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    };
    // The two orders agree in exact arithmetic for equal dimensions; the max
    // keeps the function exactly symmetric in floating point.
    return std::min(1.0, std::max(residual_norm(U, V), residual_norm(V, U)));
}

bool contains(const Subspace& U, const Subspace& V, double tol) {
    require(U.ambient_dim() == V.ambient_dim(),
            "contains: ambient dimensions differ");
    if (V.dim() == 0)
        return true;
    Mat R = V.basis() - U.basis() * (U.basis().transpose() * V.basis());
    return R.colwise().norm().maxCoeff() <= tol;
}

}  // namespace swreg
