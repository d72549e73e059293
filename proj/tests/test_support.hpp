#pragma once

#include <vector>

#include "nkappa/linalg.hpp"
#include "nkappa/matrix_function.hpp"

namespace nkappa::testing {

inline ComplexPolynomial poly(std::initializer_list<Complex> ascending) {
    return ComplexPolynomial(std::vector<Complex>(ascending));
}

inline MatrixFunction scalar(std::initializer_list<Complex> num,
                             std::initializer_list<Complex> den) {
    return MatrixFunction::scalar_rational(poly(num), poly(den));
}

inline MatrixFunction minus_inv_z() { return scalar({-1.0}, {0.0, 1.0}); }
inline MatrixFunction one_over_z() { return scalar({1.0}, {0.0, 1.0}); }
inline MatrixFunction minus_inv_z2() { return scalar({-1.0}, {0.0, 0.0, 1.0}); }
inline MatrixFunction z_cubed() { return scalar({0.0, 0.0, 0.0, 1.0}, {1.0}); }
inline MatrixFunction z_itself() { return scalar({0.0, 1.0}, {1.0}); }
inline MatrixFunction mz_over_z2p1() { return scalar({0.0, -1.0}, {1.0, 0.0, 1.0}); }

/// Herglotz pole sum with the given abscissas and positive masses.
inline MatrixFunction pole_sum(const std::vector<double>& ts, const std::vector<double>& cs) {
    ComplexPolynomial den = ComplexPolynomial::constant(1.0);
    for (double t : ts) den = den * poly({-t, 1.0});
    ComplexPolynomial num;
    for (std::size_t j = 0; j < ts.size(); ++j) {
        ComplexPolynomial rest = ComplexPolynomial::constant(-cs[j]);
        for (std::size_t l = 0; l < ts.size(); ++l) {
            if (l == j) continue;
            rest = rest * poly({-ts[l], 1.0});
        }
        num = num + rest;
    }
    return MatrixFunction::scalar_rational(num, den);
}

/// Random strictly proper symmetric scalar rational with simple well
/// separated poles (real with either residue sign, or conjugate pairs).
inline MatrixFunction random_symmetric_rational(Rng& rng, int degree) {
    ComplexPolynomial den = ComplexPolynomial::constant(1.0);
    int left = degree;
    double slot = -4.0;
    while (left > 0) {
        if (left >= 2 && rng.uniform(0.0, 1.0) < 0.4) {
            const Complex w(slot + rng.uniform(0.0, 0.5), rng.uniform(0.5, 1.5));
            den = den * poly({-w, 1.0}) * poly({-std::conj(w), 1.0});
            left -= 2;
        } else {
            den = den * poly({Complex(-(slot + rng.uniform(0.0, 0.5))), 1.0});
            left -= 1;
        }
        slot += 8.0 / std::max(1, degree);
    }
    std::vector<Complex> nc(static_cast<std::size_t>(std::max(1, degree)), Complex(0.0));
    for (auto& c : nc) c = rng.uniform(-2.0, 2.0);
    ComplexPolynomial num{std::vector<Complex>(nc)};
    if (num.is_zero()) num = ComplexPolynomial::constant(1.0);
    return MatrixFunction::scalar_rational(num.cleaned(), den.cleaned());
}

} // namespace nkappa::testing
