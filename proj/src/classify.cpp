#include "nkappa/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "nkappa/errors.hpp"

namespace nkappa {

namespace {

bool all_rational(const MatrixFunction& v) {
    if (v.kind() == MatrixFunction::Kind::Rational) return true;
    if (v.kind() == MatrixFunction::Kind::BlockDiag) {
        for (const auto& b : v.blocks())
            if (!all_rational(b)) return false;
        return true;
    }
    return false;
}

std::vector<double> y_grid(const ClassifyConfig& c) {
    std::vector<double> ys;
    const double decades = std::log10(c.y_max / c.y_min);
    const int steps = std::max(2, static_cast<int>(std::round(decades * c.samples_per_decade)));
    for (int k = 0; k <= steps; ++k)
        ys.push_back(c.y_min * std::pow(c.y_max / c.y_min, double(k) / steps));
    return ys;
}

std::vector<std::pair<double, Complex>> sweep(const MatrixFunction& v, const ClassifyConfig& c,
                                              const std::function<Complex(const CMatrix&, double)>& fn) {
    std::vector<std::pair<double, Complex>> out;
    for (double y : y_grid(c)) {
        try {
            out.emplace_back(y, fn(v(Complex(0.0, y)), y));
        } catch (const pole_error&) {
            // skip; the ray generically misses poles
        }
    }
    return out;
}

} // namespace

bool RayLimit::is_real_negative(double tol) const {
    if (state == State::Indeterminate) return false;
    const double re = value.real(), im = value.imag();
    if (std::abs(im) > tol * (1.0 + std::abs(re))) return false;
    if (state == State::Infinite) return re < 0.0;
    return re < -tol;
}

bool RayLimit::is_real_nonnegative(double tol) const {
    if (state != State::Finite) return false;
    const double re = value.real(), im = value.imag();
    if (std::abs(im) > tol * (1.0 + std::abs(re))) return false;
    return re >= -tol;
}

RayLimit ray_limit(const std::vector<std::pair<double, Complex>>& samples) {
    RayLimit out;
    out.samples = samples;
    const std::size_t n = samples.size();
    if (n < 4) return out;
    const Complex a = samples[n - 3].second, b = samples[n - 2].second, c = samples[n - 1].second;
    const double scale = std::abs(c) + 1e-300;
    if (std::abs(c - b) <= 1e-6 * scale && std::abs(b - a) <= 1e-6 * scale) {
        out.state = RayLimit::State::Finite;
        out.value = c;
        return out;
    }
    const double first = std::abs(samples[0].second);
    // Power-law decay to zero: magnitude shrinking over the trailing half
    // with a positive estimated exponent.
    bool shrinking = true;
    for (std::size_t k = n / 2; k + 1 < n; ++k)
        if (std::abs(samples[k + 1].second) > std::abs(samples[k].second) * 1.001) {
            shrinking = false;
            break;
        }
    if (shrinking && std::abs(c) < 1e-3 * std::max(1.0, first) && std::abs(b) > 0.0) {
        const double p = std::log(std::abs(b) / std::max(std::abs(c), 1e-300)) /
                         std::log(samples[n - 1].first / samples[n - 2].first);
        if (p > 0.2) {
            out.state = RayLimit::State::Finite;
            out.value = 0.0;
            return out;
        }
    }
    // Sustained growth over the trailing half of the grid.
    bool growing = true;
    for (std::size_t k = n / 2; k + 1 < n; ++k)
        if (std::abs(samples[k + 1].second) < std::abs(samples[k].second) * 0.999) {
            growing = false;
            break;
        }
    if (growing && std::abs(c) > 100.0 * std::max(1.0, first)) {
        out.state = RayLimit::State::Infinite;
        out.value = c / std::abs(c);
        return out;
    }
    return out;
}

InfinityType infinity_type(const MatrixFunction& v, const ClassifyConfig& config) {
    if (!v.is_scalar()) throw domain_error("infinity_type: scalar input required");
    InfinityType out;

    if (v.is_rational()) {
        const LaurentExpansion le = laurent_at_infinity(v, 2);
        int poly_deg = 0;
        for (int k = static_cast<int>(le.polynomial.size()); k >= 1; --k)
            if (std::abs(le.poly_coeff(k)(0, 0)) > 1e-12) { poly_deg = k; break; }
        const Complex c0 = le.c(0)(0, 0), c1 = le.c(1)(0, 0);
        if (poly_deg >= 2) {
            out.v_over_z.state = RayLimit::State::Infinite;
            Complex dir = le.poly_coeff(poly_deg)(0, 0) * std::pow(kI, poly_deg - 1);
            out.v_over_z.value = dir / std::abs(dir);
        } else {
            out.v_over_z.state = RayLimit::State::Finite;
            out.v_over_z.value = poly_deg == 1 ? le.poly_coeff(1)(0, 0) : Complex(0.0);
        }
        if (poly_deg >= 1 || std::abs(c0) > 1e-12) {
            out.z_times_v.state = RayLimit::State::Infinite;
            Complex dir = poly_deg >= 1 ? le.poly_coeff(poly_deg)(0, 0) * std::pow(kI, poly_deg + 1)
                                        : c0 * kI;
            out.z_times_v.value = dir / std::abs(dir);
        } else {
            out.z_times_v.state = RayLimit::State::Finite;
            out.z_times_v.value = c1;
        }
    } else {
        out.v_over_z = ray_limit(sweep(v, config, [](const CMatrix& m, double y) {
            return m(0, 0) / Complex(0.0, y);
        }));
        out.z_times_v = ray_limit(sweep(v, config, [](const CMatrix& m, double y) {
            return m(0, 0) * Complex(0.0, y);
        }));
        out.indeterminate = out.v_over_z.state == RayLimit::State::Indeterminate &&
                            out.z_times_v.state == RayLimit::State::Indeterminate;
    }

    if (out.v_over_z.is_real_negative())
        out.label = InfinityLabel::GenPoleNonpos;
    else if (out.z_times_v.is_real_nonnegative())
        out.label = InfinityLabel::GenZeroNonpos;
    else if (out.v_over_z.state == RayLimit::State::Infinite)
        out.label = InfinityLabel::ImproperGrowth;
    else
        out.label = InfinityLabel::Neither;
    return out;
}

namespace {

DirectionTrace trace_direction(const MatrixFunction& v, const CVector& f, const ClassifyConfig& c) {
    DirectionTrace tr;
    tr.direction = f;
    for (double y : y_grid(c)) {
        try {
            const CMatrix val = v(Complex(0.0, y));
            const CMatrix im = (val - val.adjoint()) / Complex(0.0, 2.0);
            tr.weighted_im.emplace_back(y, (f.dot(im * f)).real() * y);
        } catch (const pole_error&) {
        }
    }
    const std::size_t n = tr.weighted_im.size();
    if (n < 4) {
        tr.flagged_oscillating = true;
        return tr;
    }
    const double a = tr.weighted_im[n - 3].second, b = tr.weighted_im[n - 2].second,
                 last = tr.weighted_im[n - 1].second;
    const double scale = std::abs(last) + 1e-12;
    if (std::abs(last - b) <= 1e-5 * scale && std::abs(b - a) <= 1e-5 * scale) {
        tr.bounded = true;
        return tr;
    }
    bool growing = true;
    for (std::size_t k = n / 2; k + 1 < n; ++k)
        if (std::abs(tr.weighted_im[k + 1].second) < std::abs(tr.weighted_im[k].second)) {
            growing = false;
            break;
        }
    const double first = std::abs(tr.weighted_im[0].second);
    if (growing && std::abs(last) > 10.0 * std::max(1.0, first)) {
        tr.bounded = false;  // divergent
    } else if (std::abs(last) <= std::max(10.0, 2.0 * first)) {
        tr.bounded = true;   // wandering but bounded
    } else {
        tr.flagged_oscillating = true;
    }
    return tr;
}

} // namespace

SubspaceB subspace_B(const MatrixFunction& v, const ClassifyConfig& config) {
    SubspaceB out;
    const int m = v.dim();
    if (all_rational(v)) {
        // Proper rational data: y*(Im V(iy)f,f) -> -(C1 f, f), finite for
        // every direction, so B is all of E.
        out.exact = true;
        for (int i = 0; i < m; ++i) {
            CVector e = CVector::Zero(m);
            e(i) = 1.0;
            out.basis.push_back(std::move(e));
        }
        return out;
    }
    // Candidate directions: eigenvectors of y*Im V(iy) at the top of the
    // sweep; these separate the divergent part from the bounded part.
    std::vector<CVector> candidates;
    try {
        const Complex ztop(0.0, config.y_max);
        const CMatrix val = v(ztop);
        const CMatrix im = herm_part(CMatrix((val - val.adjoint()) / Complex(0.0, 2.0)));
        Eigen::SelfAdjointEigenSolver<CMatrix> es(im);
        for (int i = 0; i < m; ++i) candidates.push_back(es.eigenvectors().col(i));
    } catch (const pole_error&) {
        for (int i = 0; i < m; ++i) {
            CVector e = CVector::Zero(m);
            e(i) = 1.0;
            candidates.push_back(std::move(e));
        }
    }
    for (const auto& f : candidates) {
        DirectionTrace tr = trace_direction(v, f, config);
        if (tr.bounded && !tr.flagged_oscillating) out.basis.push_back(f);
        out.evidence.push_back(std::move(tr));
    }
    return out;
}

ClassificationReport classify_full(const MatrixFunction& v, const ClassifyConfig& config) {
    if (!symmetry_check(v)) throw domain_error("classify_full: input is not symmetric");
    ClassificationReport rep;
    rep.kappa = negative_squares(v, config.kernel);

    const int m = v.dim();
    if (all_rational(v)) {
        const LaurentExpansion le = laurent_at_infinity(v, 1);
        rep.cond_growth = !le.has_polynomial_part();
        rep.notes.push_back("growth condition decided exactly from the expansion at infinity");
        if (rep.cond_growth) {
            rep.b = subspace_B(v, config);
            // Decay on B = E requires the constant term to vanish.
            rep.cond_decay_on_b = le.c(0).cwiseAbs().maxCoeff() <= 1e-12;
            rep.notes.push_back(rep.cond_decay_on_b
                                    ? "decay condition holds: no constant term"
                                    : "decay condition fails: nonzero value at infinity");
        }
    } else {
        double worst_mag = -1.0;  // track the slowest-decaying growth ratio
        rep.cond_growth = true;
        for (int i = 0; i < m; ++i) {
            CVector f = CVector::Zero(m);
            f(i) = 1.0;
            auto samples = sweep(v, config, [&](const CMatrix& val, double y) {
                return f.dot(val * f) / y;
            });
            const RayLimit lim = ray_limit(samples);
            const bool ok = lim.finite() && std::abs(lim.value) <= 1e-6;
            if (!ok) rep.cond_growth = false;
            const double mag = samples.empty() ? 0.0 : std::abs(samples.back().second);
            if (mag > worst_mag) {
                worst_mag = mag;
                rep.growth_trace = samples;
            }
        }
        if (rep.cond_growth) {
            rep.b = subspace_B(v, config);
            rep.cond_decay_on_b = true;
            for (const auto& f : rep.b.basis) {
                auto samples = sweep(v, config, [&](const CMatrix& val, double) {
                    return Complex((val * f).norm(), 0.0);
                });
                const RayLimit lim = ray_limit(samples);
                if (!(lim.finite() && std::abs(lim.value) <= 1e-5)) rep.cond_decay_on_b = false;
            }
        }
    }
    if (rep.growth_trace.empty() && v.is_scalar()) {
        CVector f = CVector::Ones(1);
        rep.growth_trace = sweep(v, config, [&](const CMatrix& val, double y) {
            return val(0, 0) / y;
        });
    }

    rep.cond_strict = strictness_check(v, default_strictness_points(v));
    if (!rep.cond_growth) {
        rep.subclass = Subclass::NotApplicable;
        rep.realizable = false;
        return rep;
    }
    const int bdim = static_cast<int>(rep.b.basis.size());
    rep.subclass = bdim == 0 ? Subclass::N0 : (bdim == m ? Subclass::N1 : Subclass::N01);
    if (bdim == 0) rep.cond_decay_on_b = true;  // vacuous
    rep.realizable = rep.cond_growth && rep.cond_strict && rep.cond_decay_on_b &&
                     rep.kappa.stabilized;
    return rep;
}

std::string to_string(Subclass s) {
    switch (s) {
        case Subclass::N0: return "N0";
        case Subclass::N1: return "N1";
        case Subclass::N01: return "N01";
        case Subclass::NotApplicable: return "not_applicable";
    }
    return {};
}

std::string to_string(InfinityLabel l) {
    switch (l) {
        case InfinityLabel::GenPoleNonpos: return "gen_pole_nonpos";
        case InfinityLabel::GenZeroNonpos: return "gen_zero_nonpos";
        case InfinityLabel::Neither: return "neither";
        case InfinityLabel::ImproperGrowth: return "improper_growth";
    }
    return {};
}

} // namespace nkappa
