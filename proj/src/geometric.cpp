#include "swreg/geometric.hpp"

#include <Eigen/QR>
#include <unsupported/Eigen/KroneckerProduct>

namespace swreg {

VstarResult max_robust_controlled_invariant(const ExtendedSystem& sys,
                                            const VstarOptions& options) {
    require(!sys.modes.empty(), "max_robust_controlled_invariant: no modes");
    const int amb = sys.state_dim();
    const RankPolicy& pol = options.rank_policy;

    Subspace V0 = Subspace::full(amb);
    for (const auto& md : sys.modes)
        V0 = intersect(V0, kernel(md.Ce, pol), pol);

    std::vector<Subspace> input_images;
    for (const auto& md : sys.modes)
        input_images.push_back(image(md.Be, pol));

    VstarResult res{options.start_from_full ? Subspace::full(amb) : V0, {}};
    res.dim_history.push_back(res.subspace.dim());
    // Dimensions are non-increasing, so the fixed point arrives within amb sweeps.
    for (int sweep = 0; sweep <= amb; ++sweep) {
        Subspace next = V0;
        for (std::size_t i = 0; i < sys.modes.size(); ++i) {
            Subspace target = sum(res.subspace, input_images[i], pol);
            next = intersect(next, preimage(sys.modes[i].Ae, target, pol), pol);
        }
        res.dim_history.push_back(next.dim());
        const bool fixed = next.dim() == res.subspace.dim();
        res.subspace = std::move(next);
        if (fixed)
            break;
    }
    return res;
}

bool check_condition_i(const Subspace& vstar, int plant_dim, const RankPolicy& policy) {
    require(plant_dim >= 1 && plant_dim <= vstar.ambient_dim(),
            "check_condition_i: plant dimension out of range");
    Mat embed = Mat::Zero(vstar.ambient_dim(), plant_dim);
    embed.topRows(plant_dim) = Mat::Identity(plant_dim, plant_dim);
    Subspace plant_axes = image(embed, policy);
    return sum(vstar, plant_axes, policy).dim() == vstar.ambient_dim();
}

FrancisSolution solve_francis(const SwitchingPlant& plant, const Exosystem& exo,
                              double tol) {
    plant.validate();
    exo.validate();
    require(plant.num_modes() == exo.num_modes(), "solve_francis: mode counts differ");
    require(plant.output_dim() == exo.output_dim(), "solve_francis: output counts differ");
    require(tol > 0.0, "solve_francis: tolerance must be positive");

    const int N = plant.num_modes();
    const int n = plant.state_dim();
    const int m = plant.input_dim();
    const int p = plant.output_dim();
    const int q = exo.state_dim();

    const int unknowns = n * q + N * m * q;
    const int rows_per_mode = n * q + p * q;
    Mat G = Mat::Zero(N * rows_per_mode, unknowns);
    Vec rhs = Vec::Zero(N * rows_per_mode);
    const Mat Iq = Mat::Identity(q, q);
    const Mat In = Mat::Identity(n, n);

    for (int i = 0; i < N; ++i) {
        const auto& md = plant.modes[i];
        const auto& ex = exo.modes[i];
        const int row0 = i * rows_per_mode;
        // vec(A Pi + B Gamma - Pi Ag) = 0
        G.block(row0, 0, n * q, n * q) =
            Eigen::kroneckerProduct(Iq, md.A) - Eigen::kroneckerProduct(ex.Ag.transpose(), In);
        G.block(row0, n * q + i * m * q, n * q, m * q) = Eigen::kroneckerProduct(Iq, md.B);
        // vec(C Pi) = vec(Eg)
        G.block(row0 + n * q, 0, p * q, n * q) = Eigen::kroneckerProduct(Iq, md.C);
        rhs.segment(row0 + n * q, p * q) = Eigen::Map<const Vec>(ex.Eg.data(), p * q);
    }

    // Row scaling normalizes each scalar equation before the residual test.
    Vec scale(G.rows());
    for (Eigen::Index r = 0; r < G.rows(); ++r)
        scale(r) = std::max(1.0, G.row(r).cwiseAbs().maxCoeff());
    Mat Gs = scale.cwiseInverse().asDiagonal() * G;
    Vec rs = rhs.cwiseQuotient(scale);

    Eigen::CompleteOrthogonalDecomposition<Mat> cod(Gs);
    Vec x = cod.solve(rs);

    FrancisSolution sol;
    sol.residual = (Gs * x - rs).cwiseAbs().maxCoeff();
    sol.solvable = sol.residual <= tol;
    sol.Pi = Eigen::Map<Mat>(x.data(), n, q);
    for (int i = 0; i < N; ++i)
        sol.Gamma.push_back(Eigen::Map<Mat>(x.data() + n * q + i * m * q, m, q));
    return sol;
}

InvarianceFactors friend_of(const ExtendedSystem& sys, const Subspace& V, double tol) {
    require(V.ambient_dim() == sys.state_dim(),
            "friend_of: subspace ambient dimension does not match the system");
    require(tol > 0.0, "friend_of: tolerance must be positive");

    InvarianceFactors out;
    out.ok = true;
    const int r = V.dim();
    const int m = sys.input_dim();
    if (r == 0) {
        // Empty constraint set: every feedback is a friend of the zero subspace.
        for (std::size_t i = 0; i < sys.modes.size(); ++i) {
            out.X.emplace_back(Mat::Zero(0, 0));
            out.W.emplace_back(Mat::Zero(m, 0));
            out.residuals.push_back(0.0);
        }
        return out;
    }
    for (std::size_t i = 0; i < sys.modes.size(); ++i) {
        const auto& md = sys.modes[i];
        Mat lhs(sys.state_dim(), r + m);
        lhs << V.basis(), md.Be;
        Mat target = md.Ae * V.basis();
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(lhs);
        Mat coeff = cod.solve(target);
        const double residual = (lhs * coeff - target).norm();
        out.X.push_back(coeff.topRows(r));
        out.W.push_back(coeff.bottomRows(m));
        out.residuals.push_back(residual);
        if (residual > tol) {
            out.ok = false;
            out.failed_mode = static_cast<int>(i) + 1;
            return out;
        }
    }
    return out;
}

FriendSet assemble_friend_feedback(const ExtendedSystem& sys,
                                   const FrancisSolution& francis,
                                   const std::vector<Mat>& F1_list) {
    require(francis.Pi.size() > 0, "assemble_friend_feedback: empty Francis solution");
    require(F1_list.size() == sys.modes.size(),
            "assemble_friend_feedback: one F1 per mode required");
    const int n = sys.plant_dim;
    const int q = sys.exo_dim;
    const int m = sys.input_dim();
    require(francis.Pi.rows() == n && francis.Pi.cols() == q,
            "assemble_friend_feedback: Pi has wrong size");
    require(francis.Gamma.size() == sys.modes.size(),
            "assemble_friend_feedback: one Gamma per mode required");

    Mat graph(n + q, q);
    graph << francis.Pi, Mat::Identity(q, q);

    FriendSet fs{Subspace(graph), {}, {}};
    for (std::size_t i = 0; i < sys.modes.size(); ++i) {
        const Mat& F1 = F1_list[i];
        require(F1.rows() == m && F1.cols() == n,
                "assemble_friend_feedback: F1 must be input_dim x plant_dim");
        Mat F(m, n + q);
        F << F1, francis.Gamma[i] - F1 * francis.Pi;
        // Invariance residual of V under the closed loop (an identity up to
        // the Francis residual, for any F1).
        Mat closed = (sys.modes[i].Ae + sys.modes[i].Be * F) * fs.V.basis();
        Mat res = closed - fs.V.basis() * (fs.V.basis().transpose() * closed);
        fs.residuals.push_back(res.norm());
        fs.F.push_back(std::move(F));
    }
    return fs;
}

}  // namespace swreg
