#include "nkappa/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nkappa/errors.hpp"

namespace nkappa {

namespace {

constexpr double kRealAxisTol = 1e-7;

struct Candidate {
    Complex location;
    bool is_pole = true;
    int underlying_order = 1;
    int multiplicity = 0;       // proposed nonpositive-type multiplicity
    bool adjustable = false;    // real location with odd underlying order
    bool real_axis = false;
};

ComplexPolynomial deflate_k(const ComplexPolynomial& p, Complex root, int k) {
    ComplexPolynomial out = p;
    for (int i = 0; i < k; ++i) out = out.deflate(root);
    return out;
}

/// Leading principal-part coefficient of num/den at a real pole of order m.
Complex leading_pole_coeff(const ComplexPolynomial& num, const ComplexPolynomial& den, double x0,
                           int m) {
    const ComplexPolynomial rest = deflate_k(den, Complex(x0), m);
    return num(Complex(x0)) / rest(Complex(x0));
}

/// Leading Taylor coefficient of num/den at a real zero of order m.
Complex leading_zero_coeff(const ComplexPolynomial& num, const ComplexPolynomial& den, double x0,
                           int m) {
    const ComplexPolynomial rest = deflate_k(num, Complex(x0), m);
    return rest(Complex(x0)) / den(Complex(x0));
}

std::vector<Candidate> fast_path_candidates(const RationalEntry& e) {
    std::vector<Candidate> cands;
    auto scan = [&](const ComplexPolynomial& poly, bool poles) {
        if (poly.degree() == 0) return;
        for (const auto& [w, m] : clustered_roots(poly)) {
            const double scale = 1.0 + std::abs(w);
            if (w.imag() > kRealAxisTol * scale) {
                cands.push_back(Candidate{w, poles, m, m, false, false});
            } else if (w.imag() >= -kRealAxisTol * scale) {
                const double x0 = w.real();
                int mult;
                bool adjustable = false;
                if (m % 2 == 0) {
                    mult = m / 2;
                } else {
                    const Complex lead = poles ? leading_pole_coeff(e.num, e.den, x0, m)
                                               : leading_zero_coeff(e.num, e.den, x0, m);
                    const bool herglotz_sign = poles ? lead.real() < 0.0 : lead.real() > 0.0;
                    mult = (m - 1) / 2 + (herglotz_sign ? 0 : 1);
                    adjustable = true;
                }
                if (mult > 0 || adjustable)
                    cands.push_back(Candidate{Complex(x0, 0.0), poles, m, mult, adjustable, true});
            }
            // conjugate mirror roots are implied by symmetry and skipped
        }
    };
    scan(e.den, /*poles=*/true);
    scan(e.num, /*poles=*/false);
    return cands;
}

ComplexPolynomial strip_factor(const Candidate& c, int mult) {
    ComplexPolynomial f = ComplexPolynomial::constant(1.0);
    for (int i = 0; i < mult; ++i) f = f * ComplexPolynomial({-c.location, Complex(1.0)});
    return f;
}

MatrixFunction stripped_function(const MatrixFunction& v, const ComplexPolynomial& p,
                                 const ComplexPolynomial& q) {
    // V0 = (q q_sharp / p p_sharp) V.
    return v.times_fraction((q * q.sharp()).cleaned(), (p * p.sharp()).cleaned());
}

struct Assembled {
    ComplexPolynomial p, q;
    MatrixFunction v0;
};

Assembled assemble(const MatrixFunction& v, const std::vector<Candidate>& cands,
                   const std::vector<int>& mults) {
    ComplexPolynomial p = ComplexPolynomial::constant(1.0);
    ComplexPolynomial q = ComplexPolynomial::constant(1.0);
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const ComplexPolynomial f = strip_factor(cands[i], mults[i]);
        if (cands[i].is_pole)
            q = q * f;
        else
            p = p * f;
    }
    return Assembled{p.cleaned(), q.cleaned(), stripped_function(v, p, q)};
}

} // namespace

std::vector<NonposPoint> nonpos_points(const MatrixFunction& v, const FactorizeConfig& config) {
    if (!v.is_scalar()) throw domain_error("nonpos_points: scalar input required");
    if (!symmetry_check(v)) throw domain_error("nonpos_points: input is not symmetric");
    if (!v.is_rational()) {
        // Builtins: only the type of the point at infinity is offered.
        std::vector<NonposPoint> out;
        const InfinityType it = infinity_type(v);
        if (it.label == InfinityLabel::GenPoleNonpos)
            out.push_back(NonposPoint{Complex(0.0), true, NonposPoint::Kind::Pole, 0, -1});
        else if (it.label == InfinityLabel::GenZeroNonpos)
            out.push_back(NonposPoint{Complex(0.0), true, NonposPoint::Kind::Zero, 0, -1});
        return out;
    }
    return factorize(v, config).points;
}

Factorization factorize(const MatrixFunction& v, const FactorizeConfig& config) {
    if (!v.is_scalar()) throw domain_error("factorize: scalar input required");
    if (!symmetry_check(v)) throw domain_error("factorize: input is not symmetric");
    if (!v.is_rational()) throw domain_error("factorize: rational data required");

    const KappaEstimate kv = negative_squares(v, config.kernel);
    if (!kv.stabilized)
        throw nonstabilized_error("factorize: kappa of the input did not stabilize");

    const RationalEntry& entry = v.scalar_entry();
    std::vector<Candidate> cands = fast_path_candidates(entry);
    std::vector<int> mults;
    for (const auto& c : cands) mults.push_back(c.multiplicity);

    Factorization out;
    Assembled as = assemble(v, cands, mults);
    KappaEstimate k0 = negative_squares(as.v0, config.kernel);
    bool ok = k0.stabilized && k0.kappa == 0 &&
              std::max(as.p.degree(), as.q.degree()) == kv.kappa;

    if (!ok) {
        // Refine the odd-order real-axis multiplicities within their budgets;
        // the sign fast path can be fooled by near-cancellation.
        std::vector<std::size_t> adjustable;
        for (std::size_t i = 0; i < cands.size(); ++i)
            if (cands[i].adjustable) adjustable.push_back(i);
        const std::size_t combos = adjustable.size() <= 12 ? (1u << adjustable.size()) : 0;
        for (std::size_t mask = 0; mask < combos && !ok; ++mask) {
            std::vector<int> trial = mults;
            for (std::size_t bit = 0; bit < adjustable.size(); ++bit) {
                const Candidate& c = cands[adjustable[bit]];
                const int lo = (c.underlying_order - 1) / 2;
                const int hi = (c.underlying_order + 1) / 2;
                trial[adjustable[bit]] = (mask >> bit) & 1 ? hi : lo;
            }
            if (trial == mults) continue;
            Assembled retry = assemble(v, cands, trial);
            if (std::max(retry.p.degree(), retry.q.degree()) != kv.kappa) continue;
            KappaEstimate kr = negative_squares(retry.v0, config.kernel);
            if (kr.stabilized && kr.kappa == 0) {
                for (std::size_t bit = 0; bit < adjustable.size(); ++bit) {
                    const std::size_t idx = adjustable[bit];
                    if (trial[idx] != mults[idx]) {
                        std::ostringstream msg;
                        msg << "sign fast path overruled by the kappa oracle at "
                            << cands[idx].location.real() << ": multiplicity " << mults[idx]
                            << " -> " << trial[idx];
                        out.log.push_back(msg.str());
                    }
                }
                mults = trial;
                as = std::move(retry);
                k0 = kr;
                ok = true;
            }
        }
    }

    if (!ok) {
        std::ostringstream msg;
        msg << "factorize: could not reach kappa(V0) = 0 with max(deg p, deg q) = " << kv.kappa
            << "; last attempt had deg p = " << as.p.degree() << ", deg q = " << as.q.degree()
            << ", kappa(V0) = " << k0.kappa << (k0.stabilized ? "" : " (not stabilized)");
        throw inconsistency_error(msg.str());
    }

    out.p = as.p.monic().cleaned();
    out.q = as.q.monic().cleaned();
    out.v0 = as.v0;
    out.kappa = std::max(out.p.degree(), out.q.degree());

    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (mults[i] == 0) continue;
        NonposPoint pt;
        pt.location = cands[i].location;
        pt.kind = cands[i].is_pole ? NonposPoint::Kind::Pole : NonposPoint::Kind::Zero;
        pt.multiplicity = mults[i];
        if (config.per_candidate_diagnostics) {
            std::vector<int> solo(cands.size(), 0);
            solo[i] = mults[i];
            Assembled one = assemble(v, cands, solo);
            pt.kappa_after_strip = negative_squares(one.v0, config.kernel).kappa;
        }
        out.points.push_back(pt);
    }
    const InfinityType it = infinity_type(v);
    if (it.label == InfinityLabel::GenPoleNonpos)
        out.points.push_back(NonposPoint{Complex(0.0), true, NonposPoint::Kind::Pole, 0, -1});
    else if (it.label == InfinityLabel::GenZeroNonpos)
        out.points.push_back(NonposPoint{Complex(0.0), true, NonposPoint::Kind::Zero, 0, -1});

    // Reconstruction check: (p p_sharp / q q_sharp) V0 must reproduce V.
    const ComplexPolynomial pp = (out.p * out.p.sharp()).cleaned();
    const ComplexPolynomial qq = (out.q * out.q.sharp()).cleaned();
    const std::vector<Complex> pts =
        sample_points(v, config.check_points, config.kernel.seed ^ 0x7777, 1e6);
    double max_rel = 0.0;
    int used = 0;
    for (const auto& z : pts) {
        try {
            const Complex vz = v(z)(0, 0);
            const Complex recon = pp(z) / qq(z) * out.v0(z)(0, 0);
            max_rel = std::max(max_rel, std::abs(recon - vz) / std::max(std::abs(vz), 1e-9));
            ++used;
        } catch (const pole_error&) {
        }
    }
    if (used < config.check_points / 2 || max_rel > config.check_tol) {
        std::ostringstream msg;
        msg << "factorize: reconstruction residual " << max_rel << " over " << used << " points";
        throw inconsistency_error(msg.str());
    }
    return out;
}

RealizabilityRoute realizability_route(const MatrixFunction& v, const FactorizeConfig& config) {
    if (!v.is_scalar()) throw domain_error("realizability_route: scalar input required");
    if (!v.is_rational()) {
        const InfinityType it = infinity_type(v);
        RealizabilityRoute out;
        if (it.label == InfinityLabel::GenPoleNonpos || it.label == InfinityLabel::ImproperGrowth) {
            out.realizable = false;
            out.route = "generalized pole of nonpositive type at infinity";
            return out;
        }
        if (it.label == InfinityLabel::GenZeroNonpos) {
            out.realizable = true;
            out.route = "generalized zero of nonpositive type at infinity; realizable";
            return out;
        }
        throw domain_error("realizability_route: the equal-degree route requires rational data");
    }

    const Factorization f = factorize(v, config);
    RealizabilityRoute out;
    out.deg_p = f.p.degree();
    out.deg_q = f.q.degree();
    if (f.p.degree() > f.q.degree()) {
        out.realizable = false;
        out.route = "deg p > deg q: infinity is a generalized pole of nonpositive type";
        return out;
    }
    if (f.p.degree() < f.q.degree()) {
        out.realizable = true;
        out.route = "deg p < deg q: infinity is a generalized zero of nonpositive type";
        return out;
    }
    const RationalEntry& e0 = f.v0.scalar_entry();
    const bool nonconstant = e0.den.degree() >= 1 || e0.num.degree() >= 1;
    const bool proper = e0.num.degree() <= e0.den.degree();
    const bool strictly_proper = e0.is_zero() ? false : e0.num.degree() < e0.den.degree();
    if (!nonconstant) {
        out.realizable = false;
        out.route = "equal degrees: nonnegative-type factor is constant (strictness fails)";
        return out;
    }
    if (!proper) {
        out.realizable = false;
        out.route = "equal degrees: nonnegative-type factor has linear growth at infinity";
        return out;
    }
    if (!strictly_proper) {
        out.realizable = false;
        out.route = "equal degrees: nonnegative-type factor has a nonzero value at infinity";
        return out;
    }
    out.realizable = true;
    out.route =
        "equal degrees: nonnegative-type factor is realizable (strictly proper, nonconstant); "
        "subclass carries over from the factor";
    return out;
}

} // namespace nkappa
