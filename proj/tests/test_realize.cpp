#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nkappa/corpus.hpp"
#include "nkappa/errors.hpp"
#include "nkappa/realize.hpp"
#include "test_support.hpp"

using namespace nkappa;
using namespace nkappa::testing;

namespace {
bool close(Complex a, Complex b, double tol = 1e-9) { return std::abs(a - b) <= tol; }
}

TEST_CASE("minimal state dimensions") {
    CHECK(mcmillan_degree(minus_inv_z()) == 1);
    CHECK(mcmillan_degree(minus_inv_z2()) == 2);
    CHECK(mcmillan_degree(mz_over_z2p1()) == 2);
    CHECK(mcmillan_degree(MatrixFunction::block_diag({minus_inv_z(), minus_inv_z2()})) == 3);
    CHECK_THROWS_AS(mcmillan_degree(z_itself()), domain_error);
}

TEST_CASE("reproducing-kernel realization of the hand examples") {
    SUBCASE("-1/z gives the one-dimensional positive model") {
        const auto c = realize_rkps(minus_inv_z());
        CHECK(c.n() == 1);
        CHECK(c.metric.kappa() == 0);
        CHECK(close(impedance_V(c, Complex(0, 2))(0, 0), Complex(0, 0.5)));
        CHECK(validate(c, 1e-9).ok);
    }
    SUBCASE("-1/z^2 gives a two-dimensional model with one negative square") {
        const auto c = realize_rkps(minus_inv_z2());
        CHECK(c.n() == 2);
        CHECK(c.metric.kappa() == 1);
        CHECK(close(impedance_V(c, Complex(0, 2))(0, 0), 0.25, 1e-10));
        CHECK(close(impedance_V(c, Complex(1.0, 0.0))(0, 0), -1.0, 1e-10));
    }
    SUBCASE("-z/(z^2+1) gives metric inertia (1,0,1)") {
        const auto c = realize_rkps(mz_over_z2p1());
        CHECK(c.n() == 2);
        CHECK(c.metric.kappa() == 1);
        Rng rng(3);
        for (int i = 0; i < 10; ++i) {
            const Complex z = rng.in_rectangle(-3, 3, 0.5, 3);
            CHECK(close(impedance_V(c, z)(0, 0), mz_over_z2p1()(z)(0, 0), 1e-8));
        }
    }
    SUBCASE("non-realizable input is rejected") {
        CHECK_THROWS_AS(realize_rkps(z_itself()), domain_error);
        CHECK_THROWS_AS(realize_rkps(MatrixFunction::example1()), domain_error);
    }
}

TEST_CASE("pole-assembly realization of the hand examples") {
    SUBCASE("-1/z: positive one-dimensional block") {
        const auto c = pf_realize(minus_inv_z());
        CHECK(c.n() == 1);
        CHECK(c.metric.kappa() == 0);
        CHECK(close(impedance_V(c, Complex(0, 1))(0, 0), Complex(0, 1)));
    }
    SUBCASE("1/z: the wrong-sign residue flips the metric") {
        const auto c = pf_realize(one_over_z());
        CHECK(c.n() == 1);
        CHECK(c.metric.kappa() == 1);
        CHECK(close(impedance_V(c, Complex(0, 1))(0, 0), Complex(0, -1)));  // 1/i
    }
    SUBCASE("-1/z^2: flip-metric Jordan block") {
        const auto c = pf_realize(minus_inv_z2());
        CHECK(c.n() == 2);
        CHECK(c.metric.kappa() == 1);
        // the reference model is exactly the flip metric with the shift
        CHECK(spectral_norm(CMatrix(c.metric.matrix() - SignatureMetric::flip(2).matrix())) <
              1e-14);
        CHECK(close(impedance_V(c, Complex(0, 2))(0, 0), 0.25));
        CHECK(close(impedance_V(c, Complex(1.0, 0.0))(0, 0), -1.0));
    }
    SUBCASE("conjugate pair") {
        const auto c = pf_realize(mz_over_z2p1());
        CHECK(c.n() == 2);
        CHECK(c.metric.kappa() == 1);
        CHECK(close(impedance_V(c, Complex(0, 2))(0, 0), mz_over_z2p1()(Complex(0, 2))(0, 0)));
    }
}

TEST_CASE("round-trip verification") {
    SUBCASE("a faithful model passes") {
        const auto c = realize_rkps(minus_inv_z2());
        const auto pts = holdout_points(minus_inv_z2(), 50, 0xA1);
        const auto rep = roundtrip_verify(minus_inv_z2(), c, pts, 1e-6);
        CHECK(rep.pass);
        CHECK(rep.minimal);
        CHECK(rep.kappa_metric == 1);
        CHECK(rep.kappa_kernel == 1);
        CHECK(rep.kernel_identity_residual < 1e-8);
    }
    SUBCASE("the wrong model fails with a located error") {
        const auto c = realize_rkps(minus_inv_z2());
        const auto pts = holdout_points(minus_inv_z(), 50, 0xA2);
        const auto rep = roundtrip_verify(minus_inv_z(), c, pts, 1e-6);
        CHECK_FALSE(rep.pass);
        CHECK(rep.max_impedance_rel_err > 1e-3);
        CHECK(std::abs(rep.worst_point) > 0.0);
    }
    SUBCASE("the quadrature model reproduces the transcendental example") {
        const BlockSystem sys = chebyshev_model(1.0, 0.0, 200);
        const auto v = MatrixFunction::example2(1.0, 0.0);
        const auto pts = holdout_points(v, 20, 0xA3);
        const auto rep = roundtrip_verify(v, sys.to_colligation(), pts, 1e-6);
        CHECK(rep.pass);
        CHECK(rep.kappa_metric == 1);
        CHECK(rep.kappa_kernel == 1);
    }
}

TEST_CASE("the two construction routes agree on a corpus") {
    CorpusSpec spec;
    spec.count = 20;
    spec.seed = 0x4E4B;
    Rng rng(0xC0);
    RealizeConfig cfg;
    for (const auto& entry : generate_corpus(spec)) {
        CAPTURE(entry.name);
        const auto a = realize_rkps(entry.v, cfg);
        const auto b = pf_realize(entry.v);
        CHECK(a.n() == b.n());
        CHECK(a.metric.kappa() == entry.intended_kappa);
        CHECK(b.metric.kappa() == entry.intended_kappa);
        int done = 0;
        for (int i = 0; i < 100 && done < 50; ++i) {
            const Complex z = rng.in_rectangle(-5, 5, 0.3, 5);
            try {
                const Complex va = impedance_V(a, z)(0, 0);
                const Complex vb = impedance_V(b, z)(0, 0);
                CHECK(std::abs(va - vb) <= 1e-7 * std::max(1.0, std::abs(va)));
                ++done;
            } catch (const resolvent_error&) {
            }
        }
        CHECK(done == 50);
    }
}

TEST_CASE("metric inertia follows the kernel index") {
    CorpusSpec spec;
    spec.count = 6;
    spec.seed = 0x7E57;
    for (const auto& entry : generate_corpus(spec)) {
        const auto c = realize_rkps(entry.v);
        CHECK(c.metric.kappa() == negative_squares(entry.v).kappa);
    }
}

TEST_CASE("realizations are minimal; an uncoupled state breaks minimality") {
    const auto c = realize_rkps(mz_over_z2p1());
    std::vector<Complex> probes;
    for (int i = 0; i < 6; ++i) probes.push_back(Complex(-1.5 + 0.6 * i, 2.2));
    CHECK(minimality_check(c, probes).minimal);
    CHECK_FALSE(minimality_check(append_uncoupled_state(c), probes).minimal);
}

TEST_CASE("kernel identity holds on a grid for realized models") {
    const auto v = mz_over_z2p1();
    const auto c = realize_rkps(v);
    double worst = 0.0;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            const Complex zeta(-2.0 + 0.8 * a, 1.1 + 0.2 * a);
            const Complex z(-1.7 + 0.7 * b, 1.4 + 0.15 * b);
            const CMatrix gz =
                (c.h_r() - z * CMatrix::Identity(c.n(), c.n())).fullPivLu().solve(c.k);
            const CMatrix gzeta =
                (c.h_r() - zeta * CMatrix::Identity(c.n(), c.n())).fullPivLu().solve(c.k);
            const Complex lhs = (gzeta.adjoint() * c.metric.matrix() * gz)(0, 0);
            const Complex rhs = kernel_value(v, zeta, z)(0, 0);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
    CHECK(worst < 1e-8);
}

TEST_CASE("congruence leaves the realized impedance untouched") {
    Rng rng(0xD1);
    const auto v = mz_over_z2p1();
    const auto c = realize_rkps(v);
    const CMatrix s = CMatrix::Identity(c.n(), c.n()) + 0.5 * rng.matrix(c.n(), c.n());
    const auto moved = congruence_transform(c, s);
    for (int i = 0; i < 20; ++i) {
        const Complex z = rng.in_rectangle(-3, 3, 0.5, 3);
        const Complex a = impedance_V(c, z)(0, 0);
        const Complex b = impedance_V(moved, z)(0, 0);
        CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("block-diagonal rational input realizes through the same path") {
    const auto v = MatrixFunction::block_diag({minus_inv_z(), minus_inv_z2()});
    const auto c = realize_rkps(v);
    CHECK(c.n() == 3);
    CHECK(c.m() == 2);
    CHECK(c.metric.kappa() == 1);
    Rng rng(0xD2);
    for (int i = 0; i < 10; ++i) {
        const Complex z = rng.in_rectangle(-2, 2, 0.6, 3);
        const CMatrix diff = impedance_V(c, z) - v(z);
        CHECK(spectral_norm(diff) <= 1e-8 * std::max(1.0, spectral_norm(v(z))));
    }
}

TEST_CASE("dense matrix rational input realizes through the generic path") {
    // congruence of diag(-1/z, -1/z^2) by a constant real matrix
    const auto d = MatrixFunction::block_diag({minus_inv_z(), minus_inv_z2()});
    std::vector<std::vector<RationalEntry>> entries(2, std::vector<RationalEntry>(2));
    // R = [[1,1],[0,1]]: V = R^T D R has entries from both blocks
    // V11 = -1/z, V12 = V21 = -1/z, V22 = -1/z - 1/z^2
    entries[0][0] = RationalEntry{testing::poly({-1.0}), testing::poly({0.0, 1.0})};
    entries[0][1] = RationalEntry{testing::poly({-1.0}), testing::poly({0.0, 1.0})};
    entries[1][0] = RationalEntry{testing::poly({-1.0}), testing::poly({0.0, 1.0})};
    entries[1][1] = RationalEntry{testing::poly({-1.0, -1.0}), testing::poly({0.0, 0.0, 1.0})};
    const auto v = MatrixFunction::rational(entries);
    REQUIRE(symmetry_check(v));
    const auto c = realize_rkps(v);
    CHECK(c.n() == 3);
    CHECK(c.metric.kappa() == 1);
    Rng rng(0xD3);
    for (int i = 0; i < 10; ++i) {
        const Complex z = rng.in_rectangle(-2, 2, 0.6, 3);
        const CMatrix diff = impedance_V(c, z) - v(z);
        CHECK(spectral_norm(diff) <= 1e-7 * std::max(1.0, spectral_norm(v(z))));
    }
}

TEST_CASE("construction data carries the expected indefinite structure") {
    const auto model = realize_model(mz_over_z2p1());
    REQUIRE(model.av.rows() == 2);
    // state metric: Hermitian diagonal with inertia (1, 0, 1)
    CHECK(inertia(model.state_metric) == Inertia{1, 0, 1});
    // full pairing matrix is Hermitian and matches the kernel at the samples
    CHECK(spectral_norm(CMatrix(model.gram - model.gram.adjoint())) <
          1e-10 * std::max(1.0, spectral_norm(model.gram)));
    const auto& pts = model.sample_points;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = 0; b < pts.size(); ++b) {
            const Complex expect = kernel_value(mz_over_z2p1(), pts[b], pts[a])(0, 0);
            CHECK(std::abs(model.gram(static_cast<int>(b), static_cast<int>(a)) - expect) <
                  1e-12 * std::max(1.0, std::abs(expect)));
        }
    // the multiplication matrix is selfadjoint for the indefinite pairing
    const CMatrix residual = model.state_metric * model.av - model.av.adjoint() * model.state_metric;
    CHECK(spectral_norm(residual) <=
          1e-8 * std::max(1.0, spectral_norm(model.state_metric) * spectral_norm(model.av)));
}
