#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>

namespace nkappa {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

constexpr Complex kI{0.0, 1.0};

inline double spectral_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return m.operatorNorm();
}

/// Hermitian part (A + A*)/2.
inline CMatrix herm_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

/// Deterministic random source used by the sampling loops. A thin wrapper so
/// seeds thread through configs instead of global state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

    Complex in_rectangle(double re_lo, double re_hi, double im_lo, double im_hi) {
        return {uniform(re_lo, re_hi), uniform(im_lo, im_hi)};
    }

    Complex on_unit_disc() {
        while (true) {
            Complex z{uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
            if (std::norm(z) <= 1.0 && std::norm(z) > 1e-4) return z;
        }
    }

    CVector unit_vector(int dim) {
        CVector v(dim);
        for (int i = 0; i < dim; ++i) v(i) = on_unit_disc();
        v /= v.norm();
        return v;
    }

    CMatrix matrix(int rows, int cols, double scale = 1.0) {
        CMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                m(i, j) = scale * Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
        return m;
    }

    CMatrix hermitian(int n, double scale = 1.0) {
        CMatrix m = matrix(n, n, scale);
        return herm_part(m);
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

} // namespace nkappa
