#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nkappa/errors.hpp"
#include "nkappa/matrix_function.hpp"
#include "test_support.hpp"

using namespace nkappa;
using namespace nkappa::testing;

namespace {

bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

// Independent quadrature for (2/pi) Int sqrt(1-t^2)/(t-z) dt.
Complex chebyshev_integral(Complex z, int n) {
    Complex acc = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double th = k * std::numbers::pi / (n + 1);
        acc += 2.0 / (n + 1) * std::sin(th) * std::sin(th) / (std::cos(th) - z);
    }
    return acc;
}

} // namespace

TEST_CASE("eval of -1/z at i") { CHECK(close(minus_inv_z()(Complex(0, 1))(0, 0), Complex(0, 1))); }

TEST_CASE("example2 closed form at 2i with a quadrature cross-check") {
    const MatrixFunction v = MatrixFunction::example2(1.0, 0.0);
    const Complex z(0, 2);
    const Complex val = v(z)(0, 0);
    CHECK(close(val, Complex(0, -0.6545084971874737), 1e-12));
    // Oracle: V = -1/(d + gamma^2 * integral - z) with the integral from
    // Gauss-Chebyshev nodes.
    const Complex via_quad = -1.0 / (chebyshev_integral(z, 400) - z);
    CHECK(close(val, via_quad, 1e-10));
}

TEST_CASE("example2 rejects the branch segment and its pole") {
    const MatrixFunction v = MatrixFunction::example2(1.0, 0.0);
    CHECK_THROWS_AS(v(Complex(0.3, 0.0)), pole_error);
    CHECK_THROWS_AS(v(Complex(0.0, 2.0 / std::sqrt(5.0))), pole_error);
}

TEST_CASE("example1 tends to +i along the imaginary ray") {
    const MatrixFunction v = MatrixFunction::example1();
    const Complex v40 = v(Complex(0, 40))(0, 0);
    CHECK(std::abs(v40 - Complex(0, 1)) < 2.0 / (std::numbers::pi * 40));
    const Complex v1e4 = v(Complex(0, 1e4))(0, 0);
    CHECK(std::abs(v1e4 - Complex(0, 1)) < 1e-4);
    CHECK_THROWS_AS(v(Complex(3.0, 0.0)), pole_error);
    // stable in the lower half-plane as well
    CHECK(close(v(Complex(0, -40))(0, 0), std::conj(v40)));
}

TEST_CASE("symmetry check distinguishes real-coefficient data") {
    CHECK(symmetry_check(minus_inv_z()));
    CHECK_FALSE(symmetry_check(scalar({1.0}, {Complex(0, -1), 1.0})));  // 1/(z-i)
    CHECK(symmetry_check(mz_over_z2p1()));
    CHECK(symmetry_check(MatrixFunction::example1()));
    CHECK(symmetry_check(MatrixFunction::example2(2.0, 1.0)));
}

TEST_CASE("expansion at infinity") {
    SUBCASE("-1/z") {
        const auto le = laurent_at_infinity(minus_inv_z(), 2);
        CHECK_FALSE(le.has_polynomial_part());
        CHECK(close(le.c(0)(0, 0), 0.0));
        CHECK(close(le.c(1)(0, 0), -1.0));
    }
    SUBCASE("z^3 is pure polynomial") {
        const auto le = laurent_at_infinity(z_cubed(), 3);
        CHECK(le.has_polynomial_part());
        CHECK(close(le.poly_coeff(3)(0, 0), 1.0));
        CHECK(close(le.poly_coeff(2)(0, 0), 0.0));
        for (int k = 0; k <= 3; ++k) CHECK(close(le.c(k)(0, 0), 0.0));
    }
    SUBCASE("-z/(z^2+1) tail") {
        const auto le = laurent_at_infinity(mz_over_z2p1(), 3);
        CHECK(close(le.c(0)(0, 0), 0.0));
        CHECK(close(le.c(1)(0, 0), -1.0));
        CHECK(close(le.c(2)(0, 0), 0.0));
        CHECK(close(le.c(3)(0, 0), 1.0));
    }
    SUBCASE("substituting z = iy matches eval") {
        const MatrixFunction v = scalar({1.0, 2.0, 3.0}, {4.0, 0.0, 1.0, 1.0});
        const auto le = laurent_at_infinity(v, 4);
        const double y = 50.0;
        const Complex z(0, y);
        Complex acc = le.c(0)(0, 0);
        Complex zk = 1.0;
        for (int k = 1; k <= 4; ++k) {
            zk *= z;
            acc += le.c(k)(0, 0) / zk;
        }
        CHECK(std::abs(acc - v(z)(0, 0)) < 50.0 / std::pow(y, 5));
    }
    SUBCASE("builtin input is rejected") {
        CHECK_THROWS_AS(laurent_at_infinity(MatrixFunction::example1(), 1), domain_error);
    }
}

TEST_CASE("partial fractions of the named examples") {
    SUBCASE("-z/(z^2+1)") {
        const auto terms = partial_fractions(mz_over_z2p1());
        REQUIRE(terms.size() == 2);
        for (const auto& t : terms) {
            CHECK(t.order == 1);
            CHECK(close(t.coeffs[0](0, 0), -0.5, 1e-12));
        }
    }
    SUBCASE("-1/z^2") {
        const auto terms = partial_fractions(minus_inv_z2());
        REQUIRE(terms.size() == 1);
        CHECK(terms[0].order == 2);
        CHECK(close(terms[0].pole, 0.0));
        CHECK(close(terms[0].coeffs[1](0, 0), -1.0));
        CHECK(close(terms[0].coeffs[0](0, 0), 0.0));
    }
    SUBCASE("1/z") {
        const auto terms = partial_fractions(one_over_z());
        REQUIRE(terms.size() == 1);
        CHECK(terms[0].order == 1);
        CHECK(close(terms[0].coeffs[0](0, 0), 1.0));
    }
    SUBCASE("improper input is rejected") {
        CHECK_THROWS_AS(partial_fractions(z_itself()), domain_error);
    }
}

TEST_CASE("derivatives") {
    CHECK(close(derivative_eval(minus_inv_z(), Complex(0, 1))(0, 0), -1.0));
    CHECK(close(derivative_eval(scalar({0.0, 0.0, 0.0, 1.0}, {1.0}), Complex(2, 0))(0, 0), 12.0));
    // builtin derivative against a plain two-step central difference
    const MatrixFunction v = MatrixFunction::example2(1.0, 0.0);
    const Complex z(0, 2);
    const double h = 1e-5;
    const Complex fd = (v(z + h)(0, 0) - v(z - h)(0, 0)) / (2 * h);
    const Complex fd2 = (v(z + h / 2)(0, 0) - v(z - h / 2)(0, 0)) / h;
    const Complex extrap = (4.0 * fd2 - fd) / 3.0;
    CHECK(std::abs(derivative_eval(v, z)(0, 0) - extrap) < 1e-8);
}

TEST_CASE("block diagonal assembly") {
    const MatrixFunction v = MatrixFunction::block_diag({minus_inv_z(), minus_inv_z2()});
    CHECK(v.dim() == 2);
    const CMatrix m = v(Complex(0, 2));
    CHECK(close(m(0, 0), Complex(0, 0.5)));
    CHECK(close(m(1, 1), 0.25));
    CHECK(close(m(0, 1), 0.0));
    CHECK(symmetry_check(v));
}

TEST_CASE("partial fractions reassemble random rationals") {
    Rng rng(11);
    for (int trial = 0; trial < 8; ++trial) {
        const MatrixFunction v = random_symmetric_rational(rng, 4);
        const auto terms = partial_fractions(v);
        int checked = 0;
        for (int i = 0; i < 100 && checked < 100; ++i) {
            const Complex z = rng.in_rectangle(-6.0, 6.0, 0.2, 6.0);
            Complex recon = 0.0;
            for (const auto& t : terms)
                for (int k = 0; k < t.order; ++k)
                    recon += t.coeffs[static_cast<std::size_t>(k)](0, 0) /
                             std::pow(z - t.pole, k + 1);
            Complex truth;
            try {
                truth = v(z)(0, 0);
            } catch (const pole_error&) {
                continue;
            }
            ++checked;
            CHECK(std::abs(recon - truth) <= 1e-9 * std::max(std::abs(truth), 1e-3));
        }
        CHECK(checked >= 50);
    }
}

TEST_CASE("symmetry closure on random points") {
    Rng rng(13);
    for (int trial = 0; trial < 5; ++trial) {
        const MatrixFunction v = random_symmetric_rational(rng, 3);
        for (int i = 0; i < 50; ++i) {
            const Complex z = rng.in_rectangle(-4.0, 4.0, 0.3, 4.0);
            try {
                const Complex a = v(std::conj(z))(0, 0);
                const Complex b = std::conj(v(z)(0, 0));
                CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
            } catch (const pole_error&) {
            }
        }
    }
}

TEST_CASE("expansion coefficients of symmetric functions are Hermitian") {
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const MatrixFunction v = random_symmetric_rational(rng, 4);
        const auto le = laurent_at_infinity(v, 4);
        for (const auto& c : le.tail)
            CHECK(spectral_norm(CMatrix(c - c.adjoint())) <= 1e-12 * std::max(1.0, spectral_norm(c)));
    }
}

TEST_CASE("derivative matches extrapolated differences on pole-free discs") {
    Rng rng(19);
    const MatrixFunction v = random_symmetric_rational(rng, 4);
    for (int i = 0; i < 25; ++i) {
        const Complex z = rng.in_rectangle(-4.0, 4.0, 0.5, 4.0);
        try {
            const double h = 1e-4 * std::max(1.0, std::abs(z));
            const Complex d1 = (v(z + h)(0, 0) - v(z - h)(0, 0)) / (2 * h);
            const Complex d2 = (v(z + h / 2)(0, 0) - v(z - h / 2)(0, 0)) / h;
            const Complex extrap = (4.0 * d2 - d1) / 3.0;
            const Complex exact = derivative_eval(v, z)(0, 0);
            CHECK(std::abs(exact - extrap) <= 1e-7 * std::max(1.0, std::abs(exact)));
        } catch (const pole_error&) {
        }
    }
}

TEST_CASE("plus_real_constant shifts the diagonal") {
    const MatrixFunction v = minus_inv_z().plus_real_constant(2.5);
    CHECK(close(v(Complex(0, 1))(0, 0), Complex(2.5, 1.0)));
}

TEST_CASE("the square-root branch reflects across the real axis") {
    Rng rng(0xB7);
    for (int i = 0; i < 20; ++i) {
        const Complex z = rng.in_rectangle(-4, 4, 0.1, 4);
        CHECK(std::abs(sqrt_z2_minus_1(std::conj(z)) - std::conj(sqrt_z2_minus_1(z))) < 1e-14);
        CHECK(sqrt_z2_minus_1(z).imag() > 0.0);  // upper half-plane branch
    }
}
