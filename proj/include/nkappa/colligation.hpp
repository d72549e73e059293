#pragma once

#include <vector>

#include "nkappa/indefinite.hpp"
#include "nkappa/matrix_function.hpp"

namespace nkappa {

/// Finite-dimensional conservative system: state matrix H on (C^n, metric),
/// channel map K : E -> C^n and direction operator Jdir on E. The defining
/// identity is (H - H^[+])/2i = K Jdir K^[+] with K^[+] = K* J.
struct Colligation {
    SignatureMetric metric;
    CMatrix h_full;
    CMatrix k;
    SignatureMetric jdir;

    int n() const { return static_cast<int>(h_full.rows()); }
    int m() const { return static_cast<int>(k.cols()); }

    CMatrix h_adjoint() const { return j_adjoint(h_full, metric); }
    CMatrix h_r() const { return 0.5 * (h_full + h_adjoint()); }
    CMatrix h_i() const { return (h_full - h_adjoint()) / Complex(0.0, 2.0); }
    CMatrix k_plus() const { return k.adjoint() * metric.matrix(); }
};

struct ValidationReport {
    double identity_residual = 0.0;   // relative to the scale of H and K
    double k_injectivity = 0.0;       // sigma_min(K) / max(||K||, eps)
    bool metric_ok = false;
    bool dims_ok = false;
    bool ok = false;
};

ValidationReport validate(const Colligation& c, double tol = 1e-10);

/// W(z) = I - 2i K^[+] (H - z)^{-1} K Jdir.
CMatrix transfer_W(const Colligation& c, Complex z);

/// V(z) = K^[+] (H_R - z)^{-1} K.
CMatrix impedance_V(const Colligation& c, Complex z);

/// Residual of V(z) = i (W+I)^{-1} (W-I) Jdir, relative to max(1, ||V||).
double cayley_residual(const Colligation& c, Complex z);

struct MinimalityReport {
    bool minimal = false;
    int rank = 0;
    std::vector<double> singular_values;
};

/// Controllability-type rank test: span of (H_R - z_i)^{-1} K columns.
MinimalityReport minimality_check(const Colligation& c, const std::vector<Complex>& probes);

/// Block system T = [[A0, -B*],[B, Re(D) + i Im(D)]] on H0 (+) N with the
/// indefinite metric diag(I, -I).
struct BlockSystem {
    CMatrix a0;    // Hermitian, acts on H0
    CMatrix b;     // H0 -> N
    CMatrix d_re;  // Hermitian, acts on N
    CMatrix d_im;  // Hermitian, acts on N (schur_build uses -I)

    int n0() const { return static_cast<int>(a0.rows()); }
    int nn() const { return static_cast<int>(d_re.rows()); }
    CMatrix t() const;
    CMatrix x_of(Complex z) const;        // Re(D) + B (A0 - z)^{-1} B* - z
    CMatrix x_full(Complex z) const;      // D + B (A0 - z)^{-1} B* - z
    CMatrix impedance(Complex z) const;   // -x_of(z)^{-1}
    Colligation to_colligation() const;
};

BlockSystem schur_build(const CMatrix& a0, const CMatrix& b, const CMatrix& d_re);

struct SchurResolvent {
    CMatrix top_left, top_right, bottom_left, bottom_right;
    CMatrix assemble() const;
};

/// Resolvent of (T - z) through the Schur complement of the lower-right block.
SchurResolvent schur_resolvent(const BlockSystem& sys, Complex z);

/// Discretization of the multiplication operator on [-1,1] under the weight
/// (2/pi)sqrt(1-t^2): second-kind Chebyshev nodes and weights, rank-one
/// coupling row gamma * sqrt(w_k), channel constant d.
BlockSystem chebyshev_model(double gamma, double d, int nodes);

/// Exact rational impedance of a block system with a one-dimensional channel.
MatrixFunction block_system_rational(const BlockSystem& sys);

/// Change of state coordinates x -> S x, metric renormalized back to a
/// signature involution; the impedance function is unchanged.
Colligation congruence_transform(const Colligation& c, const CMatrix& s);

Colligation random_valid_colligation(Rng& rng, int n, int kappa, int m, bool random_jdir = false);

/// Direct sum (used by block-diagonal realizations and negative tests).
Colligation direct_sum(const Colligation& a, const Colligation& b);

/// Appends a state coordinate with no channel coupling (breaks minimality).
Colligation append_uncoupled_state(const Colligation& c);

} // namespace nkappa
