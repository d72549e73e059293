#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nkappa/errors.hpp"
#include "nkappa/kernel.hpp"
#include "test_support.hpp"

using namespace nkappa;
using namespace nkappa::testing;

namespace {
bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }
}

TEST_CASE("kernel values of -1/z") {
    const MatrixFunction v = minus_inv_z();
    CHECK(close(kernel_value(v, Complex(0, 1), Complex(0, 1))(0, 0), 1.0));
    // coincident-conjugate pair routes to the derivative
    CHECK(close(kernel_value(v, Complex(0, 1), Complex(0, -1))(0, 0), -1.0));
}

TEST_CASE("kernel of the identity function is one") {
    Rng rng(1);
    const MatrixFunction v = z_itself();
    for (int i = 0; i < 10; ++i) {
        const Complex z = rng.in_rectangle(-3, 3, 0.2, 3);
        const Complex zeta = rng.in_rectangle(-3, 3, 0.2, 3);
        CHECK(close(kernel_value(v, z, zeta)(0, 0), 1.0));
    }
}

TEST_CASE("gram matrix of -1/z over {i, 2i}") {
    const auto kg = gram_matrix(minus_inv_z(), {Complex(0, 1), Complex(0, 2)},
                                {CVector::Ones(1), CVector::Ones(1)});
    CHECK(close(kg.gram(0, 0), 1.0));
    CHECK(close(kg.gram(0, 1), 0.5));
    CHECK(close(kg.gram(1, 0), 0.5));
    CHECK(close(kg.gram(1, 1), 0.25));
    CHECK(kg.inert == Inertia{1, 1, 0});
}

TEST_CASE("gram matrix of z^3 over {i, 2i} is indefinite") {
    const auto kg = gram_matrix(z_cubed(), {Complex(0, 1), Complex(0, 2)},
                                {CVector::Ones(1), CVector::Ones(1)});
    CHECK(close(kg.gram(0, 0), -1.0));
    CHECK(close(kg.gram(0, 1), -3.0));
    CHECK(close(kg.gram(1, 1), -4.0));
    CHECK(kg.inert == Inertia{1, 0, 1});
}

TEST_CASE("empty grid gives an empty gram") {
    const auto kg = gram_matrix(minus_inv_z(), {}, {});
    CHECK(kg.gram.rows() == 0);
    CHECK(kg.inert == Inertia{0, 0, 0});
}

TEST_CASE("negative squares of the reference functions") {
    KernelConfig cfg;
    SUBCASE("-1/z is nonnegative") {
        const auto est = negative_squares(minus_inv_z(), cfg);
        CHECK(est.stabilized);
        CHECK(est.kappa == 0);
    }
    SUBCASE("-1/z^2 has one negative square") {
        const auto est = negative_squares(minus_inv_z2(), cfg);
        CHECK(est.stabilized);
        CHECK(est.kappa == 1);
    }
    SUBCASE("example2 has one negative square") {
        const auto est = negative_squares(MatrixFunction::example2(1.0, 0.0), cfg);
        CHECK(est.stabilized);
        CHECK(est.kappa == 1);
    }
    SUBCASE("asymmetric input is rejected") {
        CHECK_THROWS_AS(negative_squares(scalar({1.0}, {Complex(0, -1), 1.0}), cfg), domain_error);
    }
}

TEST_CASE("kernel rank equals the state dimension") {
    KernelConfig cfg;
    CHECK(kernel_rank(minus_inv_z(), cfg).rank == 1);
    CHECK(kernel_rank(minus_inv_z2(), cfg).rank == 2);
    CHECK(kernel_rank(mz_over_z2p1(), cfg).rank == 2);
}

TEST_CASE("strictness") {
    const auto pts = default_strictness_points(minus_inv_z());
    CHECK(strictness_check(minus_inv_z(), pts));
    const MatrixFunction c = scalar({3.0}, {1.0});
    CHECK_FALSE(strictness_check(c, default_strictness_points(c)));
    const MatrixFunction degenerate =
        MatrixFunction::block_diag({minus_inv_z(), scalar({0.0}, {1.0})});
    CHECK_FALSE(strictness_check(degenerate, default_strictness_points(degenerate)));
}

TEST_CASE("kernel is Hermitian-symmetric across argument swap") {
    Rng rng(23);
    const MatrixFunction v = random_symmetric_rational(rng, 4);
    int done = 0;
    for (int i = 0; i < 200 && done < 100; ++i) {
        const Complex z = rng.in_rectangle(-4, 4, 0.2, 4);
        const Complex zeta = rng.in_rectangle(-4, 4, 0.2, 4);
        try {
            const Complex a = std::conj(kernel_value(v, z, zeta)(0, 0));
            const Complex b = kernel_value(v, zeta, z)(0, 0);
            CHECK(std::abs(a - b) <= 1e-11 * std::max(1.0, std::abs(b)));
            ++done;
        } catch (const pole_error&) {
        }
    }
    CHECK(done == 100);
}

TEST_CASE("negative counts are monotone along the grid history") {
    Rng rng(29);
    for (int trial = 0; trial < 4; ++trial) {
        const MatrixFunction v = random_symmetric_rational(rng, 5);
        const auto est = negative_squares(v);
        for (std::size_t i = 1; i < est.history.size(); ++i)
            CHECK(est.history[i].negative >= est.history[i - 1].negative);
    }
}

TEST_CASE("kappa is invariant under adding a real constant") {
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const MatrixFunction v = random_symmetric_rational(rng, 4);
        const auto base = negative_squares(v);
        const auto shifted = negative_squares(v.plus_real_constant(rng.uniform(-3.0, 3.0)));
        CHECK(base.kappa == shifted.kappa);
    }
}
