#include "nkappa/realize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nkappa/errors.hpp"

namespace nkappa {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_real_axis(Complex w) { return std::abs(w.imag()) <= 1e-8 * (1.0 + std::abs(w)); }

CMatrix shift_matrix(int k) {
    CMatrix s = CMatrix::Zero(k, k);
    for (int i = 0; i + 1 < k; ++i) s(i, i + 1) = 1.0;
    return s;
}

/// 1-dim or flip-metric Jordan block reproducing a real-pole principal part.
Colligation real_pole_block(double t, const std::vector<Complex>& coeffs) {
    const int k = static_cast<int>(coeffs.size());
    std::vector<double> a(static_cast<std::size_t>(k) + 1, 0.0);
    for (int l = 1; l <= k; ++l) a[static_cast<std::size_t>(l)] = coeffs[static_cast<std::size_t>(l - 1)].real();
    if (k == 1) {
        const double r = a[1];
        CMatrix h(1, 1), kk(1, 1);
        h(0, 0) = t;
        kk(0, 0) = std::sqrt(std::abs(r));
        return Colligation{SignatureMetric::from_signs({r < 0 ? 1 : -1}), h, kk,
                           SignatureMetric::identity(1)};
    }
    const int sigma = a[static_cast<std::size_t>(k)] < 0 ? 1 : -1;
    // beta_i = sum_j c_j c_{k+1-j+i} must equal -sigma * a_{i+1}; solve the
    // triangular system downward from c_k.
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
    c[static_cast<std::size_t>(k)] = std::sqrt(std::abs(a[static_cast<std::size_t>(k)]));
    for (int i = k - 2; i >= 0; --i) {
        double interior = 0.0;
        for (int j = i + 2; j <= k - 1; ++j) {
            const int jp = k + 1 + i - j;
            if (jp >= i + 2 && jp <= k) interior += c[static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(jp)];
        }
        c[static_cast<std::size_t>(i + 1)] =
            (-sigma * a[static_cast<std::size_t>(i + 1)] - interior) / (2.0 * c[static_cast<std::size_t>(k)]);
    }
    CMatrix h = t * CMatrix::Identity(k, k) + shift_matrix(k);
    CMatrix kk(k, 1);
    for (int j = 1; j <= k; ++j) kk(j - 1, 0) = c[static_cast<std::size_t>(j)];
    return Colligation{SignatureMetric::flip(k, sigma), h, kk, SignatureMetric::identity(1)};
}

/// Paired block for a conjugate pole pair w, conj(w) of order k.
Colligation conj_pair_block(Complex w, const std::vector<Complex>& coeffs) {
    const int k = static_cast<int>(coeffs.size());
    const CMatrix bmat = w * CMatrix::Identity(k, k) + shift_matrix(k);
    CMatrix h = CMatrix::Zero(2 * k, 2 * k);
    h.topLeftCorner(k, k) = bmat;
    h.bottomRightCorner(k, k) = bmat.adjoint();
    CMatrix j = CMatrix::Zero(2 * k, 2 * k);
    j.topRightCorner(k, k) = CMatrix::Identity(k, k);
    j.bottomLeftCorner(k, k) = CMatrix::Identity(k, k);
    CMatrix kk = CMatrix::Zero(2 * k, 1);
    kk(k - 1, 0) = 1.0;  // u = e_k
    for (int jidx = 1; jidx <= k; ++jidx)
        kk(k + jidx - 1, 0) = -std::conj(coeffs[static_cast<std::size_t>(k - jidx)]);
    return Colligation{SignatureMetric(j), h, kk, SignatureMetric::identity(1)};
}

Colligation finish(Colligation c) {
    // Synthesize the full state matrix A = A_R + i K K^[+].
    c.h_full = c.h_full + kI * c.k * c.jdir.matrix() * c.k.adjoint() * c.metric.matrix();
    return c;
}

std::vector<Complex> circle_points(const RealizeConfig& cfg, int count, int retry) {
    std::vector<Complex> pts;
    for (int j = 0; j < count; ++j) {
        const double phi = 2.0 * kPi * (j + 0.37 * (retry + 1)) / count;
        pts.push_back(cfg.circle_center + cfg.circle_radius * Complex(std::cos(phi), std::sin(phi)));
    }
    return pts;
}

struct RkAttempt {
    Colligation colligation{SignatureMetric::identity(1), CMatrix::Zero(1, 1), CMatrix::Zero(1, 1),
                            SignatureMetric::identity(1)};
    RKModel model;
    bool ok = false;
    std::string why;
};

RkAttempt rk_attempt(const MatrixFunction& v, int n_target, int kappa, const RealizeConfig& cfg,
                     int retry) {
    RkAttempt att;
    const int m = v.dim();
    const int extra = (m == 1 ? 1 : 2) + retry;  // extra sample points help conditioning
    const int npts = (n_target + m - 1) / m + extra;
    const std::vector<Complex> pts = circle_points(cfg, npts, retry);

    // Pairwise kernel blocks M[b][a] = kernel_value(V, z_b, z_a).
    std::vector<std::vector<CMatrix>> blocks(pts.size(), std::vector<CMatrix>(pts.size()));
    try {
        for (std::size_t b = 0; b < pts.size(); ++b)
            for (std::size_t a = 0; a < pts.size(); ++a)
                blocks[b][a] = kernel_value(v, pts[b], pts[a]);
    } catch (const pole_error&) {
        att.why = "sample point hit a pole";
        return att;
    }

    const int pcount = static_cast<int>(pts.size());
    const int ncand = (pcount - 1) * m;
    CMatrix gram(ncand, ncand);
    for (int b = 1; b < pcount; ++b)
        for (int a = 1; a < pcount; ++a)
            gram.block((b - 1) * m, (a - 1) * m, m, m) =
                blocks[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] -
                blocks[static_cast<std::size_t>(b)][0] - blocks[0][static_cast<std::size_t>(a)] +
                blocks[0][0];
    gram = herm_part(gram);

    // Diagonal balancing: the difference sections can differ in size by
    // orders of magnitude, which needlessly inflates the spread of the
    // raw spectrum. Work with the candidates d_k / s_k.
    RVector sdiag(ncand);
    const double diag_floor = 1e-150 + gram.diagonal().cwiseAbs().maxCoeff() * 1e-14;
    for (int k = 0; k < ncand; ++k)
        sdiag(k) = std::sqrt(std::max(std::abs(gram(k, k)), diag_floor));
    CMatrix bal = gram;
    for (int i = 0; i < ncand; ++i)
        for (int j = 0; j < ncand; ++j) bal(i, j) /= sdiag(i) * sdiag(j);

    Eigen::SelfAdjointEigenSolver<CMatrix> es(bal);
    const double gnorm = es.eigenvalues().cwiseAbs().maxCoeff();
    const double tau = 1e-10 * ncand * std::max(1.0, gnorm);
    std::vector<int> keep;
    for (int i = 0; i < ncand; ++i)
        if (std::abs(es.eigenvalues()(i)) > tau) keep.push_back(i);
    const int r = static_cast<int>(keep.size());
    if (r != n_target) {
        std::ostringstream msg;
        msg << "state dimension from the Gram is " << r << ", expected " << n_target;
        att.why = msg.str();
        return att;
    }
    double lmin = std::numeric_limits<double>::infinity();
    for (int i : keep) lmin = std::min(lmin, std::abs(es.eigenvalues()(i)));
    if (gnorm / lmin > cfg.cond_max) {
        att.why = "Gram condition number above the bound";
        return att;
    }

    CMatrix u(ncand, r);
    RVector lambda(r);
    std::vector<int> signs(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
        u.col(i) = es.eigenvectors().col(keep[static_cast<std::size_t>(i)]);
        lambda(i) = es.eigenvalues()(keep[static_cast<std::size_t>(i)]);
        signs[static_cast<std::size_t>(i)] = lambda(i) < 0 ? -1 : 1;
    }
    int neg = 0;
    for (int s : signs)
        if (s < 0) ++neg;
    if (neg != kappa) {
        att.why = "state metric negative inertia does not match kappa";
        return att;
    }

    // Coordinates (in the lambda-orthogonal eigenbasis) of gamma(z_0)e_h,
    // from its pairings with the scaled candidates.
    CMatrix g0(r, m);
    {
        CMatrix beta(ncand, m);
        for (int b = 1; b < pcount; ++b)
            beta.block((b - 1) * m, 0, m, m) =
                blocks[static_cast<std::size_t>(b)][0] - blocks[0][0];
        for (int k = 0; k < ncand; ++k) beta.row(k) /= sdiag(k);
        const CMatrix ub = u.adjoint() * beta;
        for (int i = 0; i < r; ++i) g0.row(i) = ub.row(i) / lambda(i);
    }

    // A acts on the scaled candidates: A (d_k/s_k) = z_k (d_k/s_k)
    // + ((z_k - z_0)/s_k) gamma(z_0)e_h; least squares via the orthonormal
    // rows of U^*.
    CMatrix rhs(r, ncand);
    for (int b = 1; b < pcount; ++b)
        for (int h = 0; h < m; ++h) {
            const int kcol = (b - 1) * m + h;
            const Complex zb = pts[static_cast<std::size_t>(b)];
            rhs.col(kcol) =
                zb * u.adjoint().col(kcol) + ((zb - pts[0]) / sdiag(kcol)) * g0.col(h);
        }
    const CMatrix amat = rhs * u;
    const double resid = (amat * u.adjoint() - rhs).norm() / std::max(1.0, rhs.norm());
    if (resid > 1e-7) {
        att.why = "multiplication action left the candidate span";
        return att;
    }

    // Channel from the consistency relation K e_h = (A - z_j) gamma(z_j) e_h.
    CMatrix kmat = (amat - pts[0] * CMatrix::Identity(r, r)) * g0;
    double consistency = 0.0;
    for (int b = 1; b < pcount; ++b)
        for (int h = 0; h < m; ++h) {
            const int kcol = (b - 1) * m + h;
            const CVector gamma_bh = sdiag(kcol) * u.adjoint().col(kcol) + g0.col(h);
            const CVector alt =
                (amat - pts[static_cast<std::size_t>(b)] * CMatrix::Identity(r, r)) * gamma_bh;
            consistency = std::max(consistency, (alt - kmat.col(h)).norm());
        }
    if (consistency > 1e-7 * std::max(1.0, kmat.norm())) {
        att.why = "channel consistency relation violated across sample points";
        return att;
    }

    att.model.sample_points = pts;
    att.model.gram = CMatrix(pcount * m, pcount * m);
    for (int b = 0; b < pcount; ++b)
        for (int a = 0; a < pcount; ++a)
            att.model.gram.block(b * m, a * m, m, m) =
                blocks[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
    att.model.basis = u;
    att.model.state_metric = CMatrix::Zero(r, r);
    for (int i = 0; i < r; ++i) att.model.state_metric(i, i) = lambda(i);
    att.model.av = amat;
    att.model.kmat = kmat;

    // Rescale the eigenbasis to signature coordinates and symmetrize.
    CMatrix t = CMatrix::Zero(r, r), tinv = CMatrix::Zero(r, r);
    for (int i = 0; i < r; ++i) {
        t(i, i) = std::sqrt(std::abs(lambda(i)));
        tinv(i, i) = 1.0 / t(i, i).real();
    }
    SignatureMetric metric = SignatureMetric::from_signs(signs);
    CMatrix a_sig = t * amat * tinv;
    a_sig = 0.5 * (a_sig + j_adjoint(a_sig, metric));
    const CMatrix k_sig = t * kmat;

    att.colligation = finish(Colligation{metric, a_sig, k_sig, SignatureMetric::identity(m)});
    att.ok = true;
    return att;
}

} // namespace

int mcmillan_degree(const MatrixFunction& v, const RealizeConfig& config) {
    if (!symmetry_check(v)) throw domain_error("mcmillan_degree: input is not symmetric");
    if (v.kind() == MatrixFunction::Kind::BlockDiag) {
        int total = 0;
        for (const auto& b : v.blocks()) total += mcmillan_degree(b, config);
        return total;
    }
    if (v.is_rational() && v.is_scalar()) {
        const RationalEntry& e = v.scalar_entry();
        if (e.is_zero() || e.num.degree() >= e.den.degree())
            throw domain_error("mcmillan_degree: input is not realizable (not strictly proper)");
        return e.den.degree();
    }
    const RankEstimate rk = kernel_rank(v, config.kernel);
    if (!rk.stabilized)
        throw nonstabilized_error("mcmillan_degree: kernel rank did not stabilize");
    return rk.rank;
}

namespace {

RkAttempt realize_attempt_loop(const MatrixFunction& v, const RealizeConfig& config) {
    if (!v.is_rational() && v.kind() != MatrixFunction::Kind::BlockDiag)
        throw domain_error("realize_rkps: rational data required");

    ClassifyConfig ccfg;
    ccfg.kernel = config.kernel;
    const ClassificationReport rep = classify_full(v, ccfg);
    if (!rep.realizable) throw domain_error("realize_rkps: input is not realizable");
    const int n_target = mcmillan_degree(v, config);

    std::ostringstream history;
    for (int retry = 0; retry <= config.retries; ++retry) {
        RkAttempt att = rk_attempt(v, n_target, rep.kappa.kappa, config, retry);
        if (att.ok) {
            const ValidationReport val = validate(att.colligation, 1e-8);
            std::vector<Complex> probes =
                circle_points(config, std::max(2, (n_target + v.dim() - 1) / v.dim() + 2), 91);
            for (auto& p : probes) p += Complex(0.0, 2.0);  // second circle, |z - 4i| = 1
            const MinimalityReport min = minimality_check(att.colligation, probes);
            if (val.ok && min.minimal) return att;
            att.why = !val.ok ? "colligation identity residual above tolerance"
                              : "realization failed the minimality rank test";
        }
        history << " [retry " << retry << ": " << att.why << "]";
    }
    throw nonstabilized_error("realize_rkps: conditioning failure;" + history.str());
}

} // namespace

Colligation realize_rkps(const MatrixFunction& v, const RealizeConfig& config) {
    return realize_attempt_loop(v, config).colligation;
}

RKModel realize_model(const MatrixFunction& v, const RealizeConfig& config) {
    return realize_attempt_loop(v, config).model;
}

Colligation pf_realize(const MatrixFunction& v) {
    if (!v.is_scalar() || !v.is_rational())
        throw domain_error("pf_realize: scalar rational input required");
    if (!symmetry_check(v)) throw domain_error("pf_realize: input is not symmetric");
    const RationalEntry& e = v.scalar_entry();
    if (e.is_zero() || e.num.degree() >= e.den.degree())
        throw domain_error("pf_realize: input is not strictly proper");

    const auto terms = partial_fractions(v);
    std::vector<Colligation> pieces;
    for (const auto& t : terms) {
        std::vector<Complex> coeffs;
        for (const auto& cmat : t.coeffs) coeffs.push_back(cmat(0, 0));
        if (is_real_axis(t.pole))
            pieces.push_back(real_pole_block(t.pole.real(), coeffs));
        else if (t.pole.imag() > 0)
            pieces.push_back(conj_pair_block(t.pole, coeffs));
        // lower half-plane poles are covered by their conjugate partners
    }
    if (pieces.empty()) throw domain_error("pf_realize: no poles to realize");
    Colligation acc = pieces[0];
    for (std::size_t i = 1; i < pieces.size(); ++i) acc = direct_sum(acc, pieces[i]);
    return finish(std::move(acc));
}

std::vector<Complex> holdout_points(const MatrixFunction& v, int count, std::uint64_t seed) {
    return sample_points(v, count, seed, 1e6);
}

RoundtripReport roundtrip_verify(const MatrixFunction& v, const Colligation& c,
                                 const std::vector<Complex>& points, double tol,
                                 const KernelConfig& kernel_config) {
    RoundtripReport rep;
    for (const auto& z : points) {
        try {
            const CMatrix actual = impedance_V(c, z);
            const CMatrix expect = v(z);
            const double rel = spectral_norm(CMatrix(actual - expect)) /
                               std::max(spectral_norm(expect), 1e-6);
            if (rel > rep.max_impedance_rel_err) {
                rep.max_impedance_rel_err = rel;
                rep.worst_point = z;
            }
            ++rep.points_used;
        } catch (const pole_error&) {
        } catch (const resolvent_error&) {
        }
    }

    // Kernel identity over a 6x6 grid: Gamma_zeta^[+] Gamma_z = N(zeta, z).
    const std::vector<Complex> grid = [&] {
        std::vector<Complex> g;
        for (int i = 0; i < 6; ++i)
            g.push_back(Complex(-2.0 + 0.8 * i, 1.3 + 0.17 * i));
        return g;
    }();
    for (const auto& zeta : grid)
        for (const auto& z : grid) {
            try {
                CMatrix shifted_z = c.h_r() - z * CMatrix::Identity(c.n(), c.n());
                CMatrix shifted_zeta = c.h_r() - zeta * CMatrix::Identity(c.n(), c.n());
                const CMatrix gamma_z = Eigen::FullPivLU<CMatrix>(shifted_z).solve(c.k);
                const CMatrix gamma_zeta = Eigen::FullPivLU<CMatrix>(shifted_zeta).solve(c.k);
                const CMatrix lhs = gamma_zeta.adjoint() * c.metric.matrix() * gamma_z;
                const CMatrix rhs = kernel_value(v, zeta, z);
                const double res = spectral_norm(CMatrix(lhs - rhs)) /
                                   std::max(1.0, spectral_norm(rhs));
                rep.kernel_identity_residual = std::max(rep.kernel_identity_residual, res);
            } catch (const pole_error&) {
            }
        }

    std::vector<Complex> probes;
    const int needed = (c.n() + c.m() - 1) / c.m() + 2;
    for (int i = 0; i < needed; ++i) {
        const double phi = 2.0 * kPi * (i + 0.5) / needed;
        probes.push_back(Complex(0.0, 4.0) + 1.5 * Complex(std::cos(phi), std::sin(phi)));
    }
    try {
        rep.minimal = minimality_check(c, probes).minimal;
    } catch (const resolvent_error&) {
        rep.minimal = false;
    }

    rep.kappa_metric = c.metric.kappa();
    const KappaEstimate ke = negative_squares(v, kernel_config);
    rep.kappa_kernel = ke.kappa;
    rep.kappa_agree = ke.stabilized && rep.kappa_kernel == rep.kappa_metric;

    rep.pass = rep.points_used > 0 && rep.max_impedance_rel_err <= tol &&
               rep.kernel_identity_residual <= std::max(tol, 1e-8) && rep.kappa_agree;
    return rep;
}

} // namespace nkappa
