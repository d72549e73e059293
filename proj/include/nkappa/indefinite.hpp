#pragma once

#include "nkappa/linalg.hpp"

namespace nkappa {

struct Inertia {
    int n_plus = 0;
    int n_zero = 0;
    int n_minus = 0;

    bool operator==(const Inertia&) const = default;
};

/// Hermitian involution J (J* = J, J^2 = I) defining [x,y] = (Jx,y);
/// kappa counts the -1 eigenvalues.
class SignatureMetric {
public:
    explicit SignatureMetric(CMatrix j);
    static SignatureMetric identity(int n) { return SignatureMetric(CMatrix::Identity(n, n)); }
    static SignatureMetric from_signs(const std::vector<int>& signs);
    /// Anti-diagonal ones (optionally scaled by sign).
    static SignatureMetric flip(int n, int sign = 1);

    const CMatrix& matrix() const { return j_; }
    int dim() const { return static_cast<int>(j_.rows()); }
    int kappa() const { return kappa_; }

private:
    CMatrix j_;
    int kappa_ = 0;
};

/// Eigenvalue inertia with zero-cluster threshold tau = tol * dim * max(1, ||H||).
Inertia inertia(const CMatrix& h, double tol = 1e-10);

/// M^[+] = J M* J, the adjoint w.r.t. [x,y] = (Jx,y).
CMatrix j_adjoint(const CMatrix& m, const SignatureMetric& j);

bool is_pi_selfadjoint(const CMatrix& m, const SignatureMetric& j, double tol = 1e-10);

} // namespace nkappa
