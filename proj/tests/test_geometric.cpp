#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "swreg/geometric.hpp"
#include "swreg/paper_example.hpp"

using namespace swreg;

namespace {

Mat random_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Mat M(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            M(r, c) = uni(rng);
    return M;
}

ExtendedSystem paper_extended() {
    return build_extended(paper::plant(), paper::exosystem());
}

// Independent classical recursion over a spanning-set representation with
// LU-based null spaces (no Subspace machinery).
Mat classical_single_mode_oracle(const Mat& A, const Mat& B, const Mat& C) {
    const int n = static_cast<int>(A.rows());
    auto null_space = [](const Mat& M) -> Mat {
        if (M.rows() == 0)
            return Mat::Identity(M.cols(), M.cols());
        Eigen::FullPivLU<Mat> lu(M);
        lu.setThreshold(1e-10);
        return lu.kernel();
    };
    auto rank_of = [](const Mat& M) {
        if (M.cols() == 0)
            return Eigen::Index(0);
        Eigen::FullPivLU<Mat> lu(M);
        lu.setThreshold(1e-10);
        return lu.rank();
    };
    Mat S = null_space(C);
    for (int guard = 0; guard <= n; ++guard) {
        Mat T(n, S.cols() + B.cols());
        T << S, B;
        Mat aug(n, n + T.cols());
        aug << A, -T;
        Mat pre = null_space(aug).topRows(n);
        Mat next = pre.cols() > 0 ? Mat(pre * null_space(C * pre)) : pre;
        if (rank_of(next) == rank_of(S))
            return next;
        S = std::move(next);
    }
    return S;
}

}  // namespace

TEST_CASE("V* algorithm") {
    SUBCASE("zero error maps make the whole space invariant") {
        auto sys = paper_extended();
        for (auto& md : sys.modes)
            md.Ce.setZero();
        CHECK(max_robust_controlled_invariant(sys).subspace.dim() == 10);
    }
    SUBCASE("no input and identity output force the zero subspace") {
        ExtendedSystem sys;
        sys.plant_dim = 3;
        sys.exo_dim = 0;
        std::mt19937_64 rng(1);
        sys.modes.push_back(
            {random_matrix(rng, 3, 3), Mat::Zero(3, 1), Mat::Identity(3, 3)});
        CHECK(max_robust_controlled_invariant(sys).subspace.dim() == 0);
    }
    SUBCASE("published example: dimension 8, matches the printed basis") {
        auto res = max_robust_controlled_invariant(paper_extended());
        CHECK(res.subspace.dim() == 8);
        CHECK(distance(res.subspace, image(paper::vstar_basis())) <= 1e-3);
    }
    SUBCASE("dimension history is non-increasing") {
        auto res = max_robust_controlled_invariant(paper_extended());
        for (std::size_t k = 1; k < res.dim_history.size(); ++k)
            CHECK(res.dim_history[k] <= res.dim_history[k - 1]);
    }
    SUBCASE("fixed point satisfies both defining properties") {
        auto sys = paper_extended();
        auto V = max_robust_controlled_invariant(sys).subspace;
        for (const auto& md : sys.modes) {
            CHECK((md.Ce * V.basis()).cwiseAbs().maxCoeff() <= 1e-8);
            Subspace target = sum(V, image(md.Be));
            Mat mapped = md.Ae * V.basis();
            Mat res = mapped - target.basis() * (target.basis().transpose() * mapped);
            CHECK(res.norm() <= 1e-8);
        }
    }
    SUBCASE("maximality probe: overestimate start reaches the same subspace") {
        auto sys = paper_extended();
        auto from_kernel = max_robust_controlled_invariant(sys);
        VstarOptions opts;
        opts.start_from_full = true;
        auto from_full = max_robust_controlled_invariant(sys, opts);
        CHECK(distance(from_kernel.subspace, from_full.subspace) <= 1e-9);
    }
}

TEST_CASE("single-mode V* against the classical recursion oracle") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> n_pick(2, 4);
    std::uniform_int_distribution<int> io_pick(1, 2);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = n_pick(rng);
        Mat A = random_matrix(rng, n, n);
        Mat B = random_matrix(rng, n, io_pick(rng));
        Mat C = random_matrix(rng, io_pick(rng), n);
        ExtendedSystem sys;
        sys.plant_dim = n;
        sys.exo_dim = 0;
        sys.modes.push_back({A, B, C});
        Subspace computed = max_robust_controlled_invariant(sys).subspace;
        Mat oracle_span = classical_single_mode_oracle(A, B, C);
        Subspace oracle =
            oracle_span.cols() > 0 ? Subspace(oracle_span) : Subspace::zero(n);
        CHECK(computed.dim() == oracle.dim());
        CHECK(distance(computed, oracle) <= 1e-6);
    }
}

TEST_CASE("condition (i)") {
    SUBCASE("published example satisfies it") {
        auto V = max_robust_controlled_invariant(paper_extended()).subspace;
        CHECK(check_condition_i(V, 6));
    }
    SUBCASE("zero subspace fails when the exosystem is nontrivial") {
        CHECK_FALSE(check_condition_i(Subspace::zero(10), 6));
    }
    SUBCASE("full space always satisfies it") {
        CHECK(check_condition_i(Subspace::full(10), 6));
    }
}

TEST_CASE("Francis equations") {
    SUBCASE("scalar forced solution") {
        SwitchingPlant plant;
        plant.modes = {{Mat{{0.5}}, Mat{{1.0}}, Mat{{1.0}}}};
        Exosystem exo;
        exo.modes = {{Mat{{1.0}}, Mat{{1.0}}}};
        auto sol = solve_francis(plant, exo);
        REQUIRE(sol.solvable);
        CHECK(sol.Pi(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sol.Gamma[0](0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("zero reference forces the minimum-norm zero solution") {
        auto plant = paper::plant();
        auto exo = paper::exosystem();
        for (auto& md : exo.modes)
            md.Eg.setZero();
        auto sol = solve_francis(plant, exo);
        REQUIRE(sol.solvable);
        CHECK(sol.Pi.cwiseAbs().maxCoeff() <= 1e-10);
        for (const auto& G : sol.Gamma)
            CHECK(G.cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("published example") {
        auto sol = solve_francis(paper::plant(), paper::exosystem());
        REQUIRE(sol.solvable);
        CHECK(sol.residual <= 1e-8);

        Mat graph(10, 4);
        graph << sol.Pi, Mat::Identity(4, 4);
        Subspace V(graph);
        auto vstar = max_robust_controlled_invariant(paper_extended()).subspace;
        CHECK(contains(vstar, V, 1e-8));

        // informational: the printed V basis is a graph over the exosystem;
        // uniqueness is not claimed, so this is recorded rather than asserted
        const double d = distance(V, image(paper::v_basis()));
        MESSAGE("distance(Im[Pi;I], printed V) = ", d);
        const Mat W = paper::v_basis().bottomRows(4);
        const Mat Pi_paper = paper::v_basis().topRows(6) * W.inverse();
        MESSAGE("max |Pi - Pi_from_printed_V| = ",
                (sol.Pi - Pi_paper).cwiseAbs().maxCoeff());
    }
    SUBCASE("no input authority against persistent modes is unsolvable") {
        auto plant = paper::plant();
        for (auto& md : plant.modes)
            md.B.setZero();
        auto sol = solve_francis(plant, paper::exosystem());
        CHECK_FALSE(sol.solvable);
        CHECK(sol.residual > 1e-8);
    }
}

TEST_CASE("friend_of") {
    auto sys = paper_extended();
    SUBCASE("zero subspace trivially succeeds") {
        auto f = friend_of(sys, Subspace::zero(10));
        CHECK(f.ok);
        for (double r : f.residuals)
            CHECK(r == 0.0);
    }
    SUBCASE("full space with zero input solves exactly") {
        ExtendedSystem s;
        s.plant_dim = 3;
        s.exo_dim = 0;
        std::mt19937_64 rng(2);
        s.modes.push_back({random_matrix(rng, 3, 3), Mat::Zero(3, 1), Mat::Zero(1, 3)});
        auto f = friend_of(s, Subspace::full(3));
        REQUIRE(f.ok);
        CHECK(f.W[0].cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((s.modes[0].Ae * Mat::Identity(3, 3) - f.X[0]).cwiseAbs().maxCoeff() <=
              1e-10);
    }
    SUBCASE("graph subspace recovers W = -Gamma in graph coordinates") {
        auto sol = solve_francis(paper::plant(), paper::exosystem());
        REQUIRE(sol.solvable);
        Mat graph(10, 4);
        graph << sol.Pi, Mat::Identity(4, 4);
        Subspace V(graph);
        auto f = friend_of(sys, V);
        REQUIRE(f.ok);
        // The stored basis is graph * T with T the bottom block, so the
        // returned W maps back to graph coordinates as W T^{-1} = -Gamma.
        Mat T = V.basis().bottomRows(4);
        for (std::size_t i = 0; i < sys.modes.size(); ++i)
            CHECK((f.W[i] * T.inverse() + sol.Gamma[i]).cwiseAbs().maxCoeff() <= 1e-8);
        // and the assembled friend acts on the graph as Gamma
        std::vector<Mat> F1 = {Mat::Zero(3, 6), Mat::Zero(3, 6)};
        auto fs = assemble_friend_feedback(sys, sol, F1);
        for (std::size_t i = 0; i < sys.modes.size(); ++i)
            CHECK((fs.F[i] * graph - sol.Gamma[i]).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("non-invariant subspace fails naming the mode") {
        Mat skew(10, 1);
        skew.setZero();
        skew(0, 0) = 1.0;
        skew(6, 0) = 1.0;  // mixes plant and exosystem directions arbitrarily
        auto f = friend_of(sys, Subspace(skew));
        CHECK_FALSE(f.ok);
        CHECK(f.failed_mode >= 1);
    }
}

TEST_CASE("assemble_friend_feedback") {
    auto sys = paper_extended();
    auto sol = solve_francis(paper::plant(), paper::exosystem());
    REQUIRE(sol.solvable);

    SUBCASE("zero F1 keeps the plant block and appends Gamma") {
        std::vector<Mat> F1 = {Mat::Zero(3, 6), Mat::Zero(3, 6)};
        auto fs = assemble_friend_feedback(sys, sol, F1);
        for (std::size_t i = 0; i < fs.F.size(); ++i) {
            CHECK(fs.F[i].leftCols(6).isZero(0.0));
            CHECK(fs.F[i].rightCols(4) == sol.Gamma[i]);
            CHECK(fs.residuals[i] <= 1e-8);
        }
    }
    SUBCASE("scalar arithmetic is forced") {
        SwitchingPlant plant;
        plant.modes = {{Mat{{0.5}}, Mat{{1.0}}, Mat{{1.0}}}};
        Exosystem exo;
        exo.modes = {{Mat{{1.0}}, Mat{{1.0}}}};
        auto scalar_sys = build_extended(plant, exo);
        auto scalar_sol = solve_francis(plant, exo);
        REQUIRE(scalar_sol.solvable);
        auto fs = assemble_friend_feedback(scalar_sys, scalar_sol, {Mat{{-0.5}}});
        CHECK(fs.F[0](0, 0) == doctest::Approx(-0.5));
        CHECK(fs.F[0](0, 1) == doctest::Approx(1.0));  // Gamma - F1*Pi = 0.5 + 0.5
    }
    SUBCASE("friendship holds for random F1") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Mat> F1 = {random_matrix(rng, 3, 6), random_matrix(rng, 3, 6)};
            auto fs = assemble_friend_feedback(sys, sol, F1);
            for (std::size_t i = 0; i < fs.F.size(); ++i) {
                CHECK(fs.residuals[i] <= 1e-8);
                // plant block of the closed loop equals A + B F1
                Mat closed = sys.modes[i].Ae + sys.modes[i].Be * fs.F[i];
                Mat plant_block = paper::plant().modes[i].A +
                                  paper::plant().modes[i].B * F1[i];
                CHECK((closed.topLeftCorner(6, 6) - plant_block).cwiseAbs().maxCoeff() <=
                      1e-12);
            }
        }
    }
}

TEST_CASE("Francis-to-geometry consistency on constructed solvable systems") {
    std::mt19937_64 rng(91);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + trial % 2;
        const int q = 2;
        const int p = 1 + trial % 2;
        Mat A = random_matrix(rng, n, n);
        Mat B = Mat::Identity(n, n);  // full input authority keeps it solvable
        Mat Pi = random_matrix(rng, n, q);
        Mat Ag = random_matrix(rng, q, q);
        Mat C = random_matrix(rng, p, n);

        SwitchingPlant plant;
        plant.modes = {{A, B, C}};
        Exosystem exo;
        exo.modes = {{Ag, C * Pi}};

        auto sol = solve_francis(plant, exo);
        REQUIRE(sol.solvable);
        auto sys = build_extended(plant, exo);
        auto vstar = max_robust_controlled_invariant(sys).subspace;
        Mat graph(n + q, q);
        graph << sol.Pi, Mat::Identity(q, q);
        CHECK(contains(vstar, Subspace(graph), 1e-7));
    }
}
