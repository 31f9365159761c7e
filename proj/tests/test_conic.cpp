#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "trisma/conic.hpp"
#include "trisma/rng.hpp"

using namespace trisma;
using namespace trisma::conic;

namespace {

ConeProgram make_program(const Eigen::VectorXd& c, const Eigen::MatrixXd& a,
                         const Eigen::VectorXd& b, std::vector<ConeBlock> blocks) {
    ConeProgram prog;
    prog.c = c;
    prog.b = b;
    prog.A = a.sparseView();
    prog.cones.blocks = std::move(blocks);
    return prog;
}

Eigen::VectorXd random_vec(RandomStream& rng, int n, double scale) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = scale * rng.normal();
    return v;
}

}  // namespace

TEST_CASE("svec/smat round trip and inner product") {
    RandomStream rng(7);
    Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(4, 4, [&](Eigen::Index, Eigen::Index) {
        return rng.normal();
    });
    a = (a + a.transpose()).eval();
    Eigen::MatrixXd b = Eigen::MatrixXd::NullaryExpr(4, 4, [&](Eigen::Index, Eigen::Index) {
        return rng.normal();
    });
    b = (b + b.transpose()).eval();
    CHECK((smat(svec(a), 4) - a).norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(svec(a).dot(svec(b)) == doctest::Approx((a * b).trace()).epsilon(1e-12));
}

TEST_CASE("projection trivials") {
    // nonneg clamp
    Eigen::VectorXd v(2);
    v << -1.0, 2.0;
    project_block({ConeKind::NonNeg, 2}, v);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 2.0);

    // psd eigenvalue clamp: diag(1,-3) -> diag(1,0)
    Eigen::MatrixXd m = Eigen::Vector2d(1.0, -3.0).asDiagonal();
    Eigen::VectorXd sv = svec(m);
    project_block({ConeKind::Psd, 2}, sv);
    Eigen::MatrixXd proj = smat(sv, 2);
    CHECK(proj(0, 0) == doctest::Approx(1.0));
    CHECK(proj(1, 1) == doctest::Approx(0.0));
    CHECK(std::abs(proj(0, 1)) < 1e-12);

    // exp: interior point unchanged
    Eigen::VectorXd e(3);
    e << 0.0, 1.0, 2.0;
    Eigen::VectorXd e2 = e;
    project_block({ConeKind::Exp, 1}, e2);
    CHECK((e2 - e).norm() < 1e-12);
}

TEST_CASE("projection properties: idempotence, Moreau, variational inequality") {
    RandomStream rng(12345);
    const std::vector<ConeBlock> blocks = {
        {ConeKind::Zero, 4}, {ConeKind::NonNeg, 4}, {ConeKind::SecondOrder, 5},
        {ConeKind::Psd, 3},  {ConeKind::Exp, 1},
    };
    for (const auto& block : blocks) {
        const int rows = block_rows(block);
        int vi_checked = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const double scale = (trial % 3 == 0) ? 0.1 : (trial % 3 == 1 ? 1.0 : 10.0);
            Eigen::VectorXd v = random_vec(rng, rows, scale);

            Eigen::VectorXd p = v;
            project_block(block, p);
            Eigen::VectorXd pp = p;
            project_block(block, pp);
            CAPTURE((int)block.kind);
            REQUIRE((pp - p).norm() <= 1e-10 * std::max(1.0, p.norm()));

            // Moreau: v = proj_K(v) - proj_Kpolar... expressed with the dual cone:
            // v = proj_K(v) - proj_{K*}(-v)
            Eigen::VectorXd d = -v;
            project_dual_block(block, d);
            REQUIRE((p - d - v).norm() <= 1e-8 * std::max(1.0, v.norm()));

            // variational inequality against random cone points w: <v - p, w - p> <= 0
            if (trial < 100) {
                for (int j = 0; j < 10; ++j) {
                    Eigen::VectorXd w = random_vec(rng, rows, scale);
                    project_block(block, w);
                    const double inner = (v - p).dot(w - p);
                    REQUIRE(inner <= 1e-8 * std::max(1.0, v.norm() * w.norm()));
                    ++vi_checked;
                }
            }
        }
        CHECK(vi_checked == 1000);
    }
}

TEST_CASE("lp: min x st x >= 1") {
    // s = x - 1 >= 0  ->  -x + s = -1
    Eigen::MatrixXd a(1, 1);
    a << -1.0;
    Eigen::VectorXd b(1), c(1);
    b << -1.0;
    c << 1.0;
    auto prog = make_program(c, a, b, {{ConeKind::NonNeg, 1}});
    auto sol = solve(prog);
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("sdp: min tr(X) st X >= I2") {
    // variables: svec(X) (3); constraint svec(X) - svec(I) in PSD
    Eigen::MatrixXd a = -Eigen::MatrixXd::Identity(3, 3);
    Eigen::VectorXd b = -svec(Eigen::MatrixXd::Identity(2, 2));
    Eigen::VectorXd c(3);
    c << 1.0, 0.0, 1.0;  // trace of svec layout for side 2: entries (0,0),(0,1),(1,1)
    auto prog = make_program(c, a, b, {{ConeKind::Psd, 2}});
    auto sol = solve(prog);
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(prog.c.dot(sol.x) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("exp: max t st (t,1,2) in Kexp gives ln 2") {
    // minimize -t ; slack rows pin (s1,s2,s3) = (t,1,2)
    Eigen::MatrixXd a(3, 1);
    a << -1.0, 0.0, 0.0;
    // second row must not be all-zero: add a pinned variable? use b for constants
    // rows: s1 = t, s2 = 1, s3 = 2 -> A = [[-1],[0],[0]] has zero rows; instead
    // introduce variable u pinned to 1 by a Zero cone.
    Eigen::MatrixXd a2(4, 2);
    a2.setZero();
    a2(0, 1) = 1.0;   // zero cone: s0 = 1 - u = 0
    a2(1, 0) = -1.0;  // s1 = t
    a2(2, 1) = -1.0;  // s2 = u
    a2(3, 1) = -2.0;  // s3 = 2u
    Eigen::VectorXd b(4), c(2);
    b << 1.0, 0.0, 0.0, 0.0;
    c << -1.0, 0.0;
    auto prog = make_program(c, a2, b, {{ConeKind::Zero, 1}, {ConeKind::Exp, 1}});
    auto sol = solve(prog);
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(sol.x[0] == doctest::Approx(std::log(2.0)).epsilon(1e-4));
}

TEST_CASE("infeasible lp is certified") {
    // x >= 1 and x <= 0
    Eigen::MatrixXd a(2, 1);
    a << -1.0, 1.0;
    Eigen::VectorXd b(2), c(1);
    b << -1.0, 0.0;
    c << 0.0;
    // c = 0 makes every feasible point optimal; infeasibility must be certified
    Eigen::VectorXd c1(1);
    c1 << 1.0;
    auto prog = make_program(c1, a, b, {{ConeKind::NonNeg, 2}});
    auto sol = solve(prog);
    CHECK(sol.status == SolveStatus::PrimalInfeasible);
}

TEST_CASE("unbounded lp is certified dual infeasible") {
    // min -x st x >= 0
    Eigen::MatrixXd a(1, 1);
    a << -1.0;
    Eigen::VectorXd b(1), c(1);
    b << 0.0;
    c << -1.0;
    auto prog = make_program(c, a, b, {{ConeKind::NonNeg, 1}});
    auto sol = solve(prog);
    CHECK(sol.status == SolveStatus::DualInfeasible);
}

TEST_CASE("random feasible sdp reaches kkt residuals") {
    RandomStream rng(99);
    // construct strictly feasible primal/dual pair over PSD(3) + NonNeg(2)
    const int side = 3;
    const int sv = svec_dim(side);
    const int n = 4;
    const int m = sv + 2;
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    Eigen::VectorXd x0 = random_vec(rng, n, 1.0);
    // strictly interior slacks
    Eigen::MatrixXd sm = Eigen::MatrixXd::Identity(side, side) * 2.0;
    Eigen::VectorXd s0(m);
    s0.head(sv) = svec(sm);
    s0.tail(2) << 1.0, 1.5;
    Eigen::VectorXd b = a * x0 + s0;
    // dual interior: y0 strictly inside the dual cone
    Eigen::VectorXd y0(m);
    y0.head(sv) = svec(Eigen::MatrixXd::Identity(side, side));
    y0.tail(2) << 1.0, 1.0;
    Eigen::VectorXd c = -a.transpose() * y0;
    auto prog = make_program(c, a, b, {{ConeKind::Psd, side}, {ConeKind::NonNeg, 2}});
    auto sol = solve(prog);
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(sol.res_primal <= 1e-6);
    CHECK(sol.res_dual <= 1e-6);
    CHECK(sol.res_gap <= 1e-6);
}

TEST_CASE("deterministic iterate sequence") {
    Eigen::MatrixXd a(2, 2);
    a << -1.0, 0.0, 0.0, -1.0;
    Eigen::VectorXd b(2), c(2);
    b << -1.0, -2.0;
    c << 1.0, 1.0;
    auto prog = make_program(c, a, b, {{ConeKind::NonNeg, 2}});
    auto s1 = solve(prog);
    auto s2 = solve(prog);
    CHECK(s1.iterations == s2.iterations);
    CHECK((s1.x - s2.x).norm() == 0.0);
    CHECK((s1.y - s2.y).norm() == 0.0);
}
