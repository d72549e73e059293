#include "nkappa/colligation.hpp"

#include <cmath>
#include <numbers>

#include "nkappa/errors.hpp"

namespace nkappa {

namespace {

CMatrix solve_resolvent(const CMatrix& a, Complex z, const CMatrix& rhs, const char* what) {
    CMatrix shifted = a - z * CMatrix::Identity(a.rows(), a.cols());
    Eigen::FullPivLU<CMatrix> lu(shifted);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) throw resolvent_error(z, what);
    return lu.solve(rhs);
}

} // namespace

ValidationReport validate(const Colligation& c, double tol) {
    ValidationReport rep;
    rep.dims_ok = c.h_full.rows() == c.h_full.cols() && c.h_full.rows() == c.metric.dim() &&
                  c.k.rows() == c.h_full.rows() && c.jdir.dim() == c.m();
    if (!rep.dims_ok) throw domain_error("validate: dimension mismatch");
    rep.metric_ok = true;  // SignatureMetric enforces its invariants at construction

    const CMatrix lhs = c.h_i();
    const CMatrix rhs = c.k * c.jdir.matrix() * c.k_plus();
    const double scale =
        std::max({1.0, spectral_norm(c.h_full), spectral_norm(c.k) * spectral_norm(c.k)});
    rep.identity_residual = spectral_norm(CMatrix(lhs - rhs)) / scale;

    Eigen::JacobiSVD<CMatrix> svd(c.k);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    rep.k_injectivity = smin / std::max(smax, 1e-300);

    rep.ok = rep.metric_ok && rep.identity_residual <= tol && rep.k_injectivity > 1e-12;
    return rep;
}

CMatrix transfer_W(const Colligation& c, Complex z) {
    const CMatrix res = solve_resolvent(c.h_full, z, c.k, "transfer_W: z in the spectrum of H");
    return CMatrix::Identity(c.m(), c.m()) -
           Complex(0.0, 2.0) * c.k_plus() * res * c.jdir.matrix();
}

CMatrix impedance_V(const Colligation& c, Complex z) {
    const CMatrix res = solve_resolvent(c.h_r(), z, c.k, "impedance_V: z in the spectrum of H_R");
    return c.k_plus() * res;
}

double cayley_residual(const Colligation& c, Complex z) {
    const CMatrix w = transfer_W(c, z);
    const CMatrix v = impedance_V(c, z);
    const CMatrix wp = w + CMatrix::Identity(c.m(), c.m());
    Eigen::FullPivLU<CMatrix> lu(wp);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) throw resolvent_error(z, "cayley: W(z) + I singular");
    const CMatrix via_w =
        kI * lu.solve(CMatrix(w - CMatrix::Identity(c.m(), c.m()))) * c.jdir.matrix();
    return spectral_norm(CMatrix(v - via_w)) / std::max(1.0, spectral_norm(v));
}

MinimalityReport minimality_check(const Colligation& c, const std::vector<Complex>& probes) {
    const int n = c.n(), m = c.m();
    const int needed = (n + m - 1) / m;
    if (static_cast<int>(probes.size()) < needed)
        throw domain_error("minimality_check: not enough probe points");
    CMatrix stack(n, m * static_cast<int>(probes.size()));
    int col = 0;
    for (const auto& z : probes) {
        stack.block(0, col, n, m) =
            solve_resolvent(c.h_r(), z, c.k, "minimality_check: probe hits the spectrum");
        col += m;
    }
    Eigen::JacobiSVD<CMatrix> svd(stack);
    MinimalityReport rep;
    const double smax = svd.singularValues()(0);
    for (int i = 0; i < svd.singularValues().size(); ++i)
        rep.singular_values.push_back(svd.singularValues()(i));
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10 * std::max(smax, 1e-300)) ++rep.rank;
    rep.minimal = rep.rank == n;
    return rep;
}

CMatrix BlockSystem::t() const {
    const int p = n0(), q = nn();
    CMatrix out(p + q, p + q);
    out.topLeftCorner(p, p) = a0;
    out.topRightCorner(p, q) = -b.adjoint();
    out.bottomLeftCorner(q, p) = b;
    out.bottomRightCorner(q, q) = d_re + kI * d_im;
    return out;
}

CMatrix BlockSystem::x_of(Complex z) const {
    const CMatrix res = solve_resolvent(a0, z, b.adjoint(), "schur: z in the spectrum of A0");
    return d_re + b * res - z * CMatrix::Identity(nn(), nn());
}

CMatrix BlockSystem::x_full(Complex z) const {
    const CMatrix res = solve_resolvent(a0, z, b.adjoint(), "schur: z in the spectrum of A0");
    return d_re + kI * d_im + b * res - z * CMatrix::Identity(nn(), nn());
}

CMatrix BlockSystem::impedance(Complex z) const {
    const CMatrix x = x_of(z);
    Eigen::FullPivLU<CMatrix> lu(x);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) throw pole_error(z, "block system impedance: X(z) singular");
    return -lu.solve(CMatrix(CMatrix::Identity(nn(), nn())));
}

Colligation BlockSystem::to_colligation() const {
    const int p = n0(), q = nn();
    std::vector<int> signs(static_cast<std::size_t>(p + q), 1);
    for (int i = 0; i < q; ++i) signs[static_cast<std::size_t>(p + i)] = -1;
    CMatrix kmat = CMatrix::Zero(p + q, q);
    kmat.bottomRows(q) = CMatrix::Identity(q, q);
    return Colligation{SignatureMetric::from_signs(signs), t(), std::move(kmat),
                       SignatureMetric::identity(q)};
}

BlockSystem schur_build(const CMatrix& a0, const CMatrix& b, const CMatrix& d_re) {
    if (a0.rows() != a0.cols() || d_re.rows() != d_re.cols() || b.rows() != d_re.rows() ||
        b.cols() != a0.rows())
        throw domain_error("schur_build: inconsistent block dimensions");
    const double sa = std::max(1.0, spectral_norm(a0));
    if (spectral_norm(CMatrix(a0 - a0.adjoint())) > 1e-10 * sa)
        throw domain_error("schur_build: A0 must be Hermitian");
    const double sd = std::max(1.0, spectral_norm(d_re));
    if (spectral_norm(CMatrix(d_re - d_re.adjoint())) > 1e-10 * sd)
        throw domain_error("schur_build: D must be Hermitian");
    BlockSystem sys;
    sys.a0 = herm_part(a0);
    sys.b = b;
    sys.d_re = herm_part(d_re);
    sys.d_im = -CMatrix::Identity(d_re.rows(), d_re.cols());
    return sys;
}

CMatrix SchurResolvent::assemble() const {
    const int p = static_cast<int>(top_left.rows()), q = static_cast<int>(bottom_right.rows());
    CMatrix out(p + q, p + q);
    out.topLeftCorner(p, p) = top_left;
    out.topRightCorner(p, q) = top_right;
    out.bottomLeftCorner(q, p) = bottom_left;
    out.bottomRightCorner(q, q) = bottom_right;
    return out;
}

SchurResolvent schur_resolvent(const BlockSystem& sys, Complex z) {
    const int p = sys.n0(), q = sys.nn();
    CMatrix shifted = sys.a0 - z * CMatrix::Identity(p, p);
    Eigen::FullPivLU<CMatrix> lua(shifted);
    lua.setThreshold(1e-13);
    if (!lua.isInvertible()) throw resolvent_error(z, "schur_resolvent: z in the spectrum of A0");
    const CMatrix ra = lua.solve(CMatrix(CMatrix::Identity(p, p)));
    const CMatrix c = -sys.b.adjoint();
    const CMatrix x = sys.d_re + kI * sys.d_im - sys.b * ra * c - z * CMatrix::Identity(q, q);
    Eigen::FullPivLU<CMatrix> lu(x);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible())
        throw resolvent_error(z, "schur_resolvent: Schur complement X(z) singular");
    const CMatrix xinv = lu.solve(CMatrix(CMatrix::Identity(q, q)));

    SchurResolvent out;
    out.top_left = ra * (CMatrix::Identity(p, p) + c * xinv * sys.b * ra);
    out.top_right = -ra * c * xinv;
    out.bottom_left = -xinv * sys.b * ra;
    out.bottom_right = xinv;
    return out;
}

BlockSystem chebyshev_model(double gamma, double d, int nodes) {
    if (nodes < 1) throw domain_error("chebyshev_model: need at least one node");
    constexpr double pi = std::numbers::pi;
    CMatrix a0 = CMatrix::Zero(nodes, nodes);
    CMatrix b(1, nodes);
    for (int k = 1; k <= nodes; ++k) {
        const double theta = k * pi / (nodes + 1);
        a0(k - 1, k - 1) = std::cos(theta);
        const double weight = 2.0 / (nodes + 1) * std::sin(theta) * std::sin(theta);
        b(0, k - 1) = gamma * std::sqrt(weight);
    }
    CMatrix dmat(1, 1);
    dmat(0, 0) = d;
    return schur_build(a0, b, dmat);
}

MatrixFunction block_system_rational(const BlockSystem& sys) {
    if (sys.nn() != 1) throw domain_error("block_system_rational: one-dimensional channel required");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sys.a0);
    const CMatrix vecs = es.eigenvectors();
    const CVector coup = (sys.b * vecs).row(0).transpose();
    // X(z) = d + sum |c_k|^2/(t_k - z) - z, so V = -den_X/num_X.
    ComplexPolynomial den = ComplexPolynomial::constant(1.0);
    for (int k = 0; k < sys.n0(); ++k)
        den = den * ComplexPolynomial({Complex(es.eigenvalues()(k)), Complex(-1.0)});
    ComplexPolynomial num =
        den * ComplexPolynomial({Complex(sys.d_re(0, 0)), Complex(-1.0)});
    for (int k = 0; k < sys.n0(); ++k) {
        ComplexPolynomial rest = ComplexPolynomial::constant(std::norm(coup(k)));
        for (int l = 0; l < sys.n0(); ++l) {
            if (l == k) continue;
            rest = rest * ComplexPolynomial({Complex(es.eigenvalues()(l)), Complex(-1.0)});
        }
        num = num + rest;
    }
    return MatrixFunction::scalar_rational(den * Complex(-1.0), num);
}

Colligation congruence_transform(const Colligation& c, const CMatrix& s) {
    Eigen::FullPivLU<CMatrix> lu(s);
    if (!lu.isInvertible()) throw domain_error("congruence_transform: singular transform");
    const CMatrix sinv = lu.inverse();
    const CMatrix gram = sinv.adjoint() * c.metric.matrix() * sinv;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm_part(gram));
    CMatrix scale = CMatrix::Zero(c.n(), c.n());
    std::vector<int> signs(static_cast<std::size_t>(c.n()));
    for (int i = 0; i < c.n(); ++i) {
        const double ev = es.eigenvalues()(i);
        signs[static_cast<std::size_t>(i)] = ev < 0 ? -1 : 1;
        scale(i, i) = std::sqrt(std::abs(ev));
    }
    const CMatrix t = scale * es.eigenvectors().adjoint() * s;
    Eigen::FullPivLU<CMatrix> lut(t);
    const CMatrix tinv = lut.inverse();
    return Colligation{SignatureMetric::from_signs(signs), t * c.h_full * tinv, t * c.k, c.jdir};
}

Colligation random_valid_colligation(Rng& rng, int n, int kappa, int m, bool random_jdir) {
    // Random orthonormal frame for the metric eigenbasis.
    Eigen::HouseholderQR<CMatrix> qr(rng.matrix(n, n));
    CMatrix u = qr.householderQ();
    std::vector<int> signs(static_cast<std::size_t>(n), 1);
    for (int i = 0; i < kappa; ++i) signs[static_cast<std::size_t>(i)] = -1;
    CMatrix jsig = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) jsig(i, i) = signs[static_cast<std::size_t>(i)];
    const CMatrix j = u * jsig * u.adjoint();
    SignatureMetric metric(herm_part(j));

    const CMatrix h_r = metric.matrix() * rng.hermitian(n);  // pi-selfadjoint by construction
    CMatrix k = rng.matrix(n, m);
    Eigen::JacobiSVD<CMatrix> svd(k);
    if (svd.singularValues()(svd.singularValues().size() - 1) < 1e-3)
        k += 0.1 * CMatrix::Identity(n, m);

    std::vector<int> dir_signs(static_cast<std::size_t>(m), 1);
    if (random_jdir && m > 1) dir_signs[0] = -1;
    SignatureMetric jdir = SignatureMetric::from_signs(dir_signs);

    const CMatrix h = h_r + kI * k * jdir.matrix() * k.adjoint() * metric.matrix();
    return Colligation{std::move(metric), h, std::move(k), std::move(jdir)};
}

Colligation direct_sum(const Colligation& a, const Colligation& b) {
    if (a.m() != b.m() || (a.jdir.matrix() - b.jdir.matrix()).norm() != 0.0)
        throw domain_error("direct_sum: channel spaces must match");
    const int n = a.n() + b.n();
    CMatrix j = CMatrix::Zero(n, n);
    j.topLeftCorner(a.n(), a.n()) = a.metric.matrix();
    j.bottomRightCorner(b.n(), b.n()) = b.metric.matrix();
    CMatrix h = CMatrix::Zero(n, n);
    h.topLeftCorner(a.n(), a.n()) = a.h_full;
    h.bottomRightCorner(b.n(), b.n()) = b.h_full;
    CMatrix k(n, a.m());
    k.topRows(a.n()) = a.k;
    k.bottomRows(b.n()) = b.k;
    return Colligation{SignatureMetric(j), std::move(h), std::move(k), a.jdir};
}

Colligation append_uncoupled_state(const Colligation& c) {
    const int n = c.n() + 1;
    CMatrix j = CMatrix::Zero(n, n);
    j.topLeftCorner(c.n(), c.n()) = c.metric.matrix();
    j(n - 1, n - 1) = 1.0;
    CMatrix h = CMatrix::Zero(n, n);
    h.topLeftCorner(c.n(), c.n()) = c.h_full;
    h(n - 1, n - 1) = 0.5;  // arbitrary real eigenvalue, no coupling
    CMatrix k = CMatrix::Zero(n, c.m());
    k.topRows(c.n()) = c.k;
    return Colligation{SignatureMetric(j), std::move(h), std::move(k), c.jdir};
}

} // namespace nkappa
