#include "nkappa/indefinite.hpp"

#include <cmath>

#include "nkappa/errors.hpp"

namespace nkappa {

SignatureMetric::SignatureMetric(CMatrix j) : j_(std::move(j)) {
    if (j_.rows() != j_.cols()) throw domain_error("signature metric must be square");
    const double scale = std::max(1.0, spectral_norm(j_));
    if (spectral_norm(CMatrix(j_ - j_.adjoint())) > 1e-12 * scale)
        throw domain_error("signature metric is not Hermitian");
    if (spectral_norm(CMatrix(j_ * j_ - CMatrix::Identity(j_.rows(), j_.cols()))) > 1e-10 * scale)
        throw domain_error("signature metric is not an involution");
    const Inertia in = inertia(j_);
    kappa_ = in.n_minus;
}

SignatureMetric SignatureMetric::from_signs(const std::vector<int>& signs) {
    const int n = static_cast<int>(signs.size());
    CMatrix j = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) j(i, i) = signs[static_cast<std::size_t>(i)] < 0 ? -1.0 : 1.0;
    return SignatureMetric(std::move(j));
}

SignatureMetric SignatureMetric::flip(int n, int sign) {
    CMatrix j = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) j(i, n - 1 - i) = double(sign);
    return SignatureMetric(std::move(j));
}

Inertia inertia(const CMatrix& h, double tol) {
    const int n = static_cast<int>(h.rows());
    if (n == 0) return {};
    const double scale = spectral_norm(h);
    if (spectral_norm(CMatrix(h - h.adjoint())) > std::max(tol, 1e-10) * std::max(1.0, scale))
        throw domain_error("inertia: matrix is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm_part(h), Eigen::EigenvaluesOnly);
    const double tau = tol * n * std::max(1.0, scale);
    Inertia out;
    for (int i = 0; i < n; ++i) {
        const double ev = es.eigenvalues()(i);
        if (ev < -tau)
            ++out.n_minus;
        else if (ev > tau)
            ++out.n_plus;
        else
            ++out.n_zero;
    }
    return out;
}

CMatrix j_adjoint(const CMatrix& m, const SignatureMetric& j) {
    if (m.rows() != j.dim() || m.cols() != j.dim())
        throw domain_error("j_adjoint: dimension mismatch");
    return j.matrix() * m.adjoint() * j.matrix();
}

bool is_pi_selfadjoint(const CMatrix& m, const SignatureMetric& j, double tol) {
    const double scale = std::max(1e-300, spectral_norm(m));
    return spectral_norm(CMatrix(m - j_adjoint(m, j))) <= tol * scale;
}

} // namespace nkappa
