#include "nkappa/matrix_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nkappa/errors.hpp"

namespace nkappa {

namespace {

constexpr double kPi = std::numbers::pi;

double poly_eval_scale(const ComplexPolynomial& p, Complex z) {
    double s = 0.0, zk = 1.0;
    const double az = std::abs(z);
    for (int k = 0; k <= p.degree(); ++k) {
        s += std::abs(p.coeff(k)) * zk;
        zk *= az;
    }
    return s;
}

/// Coefficients of p(c + w) as a polynomial in w (Taylor shift).
ComplexPolynomial taylor_shift(const ComplexPolynomial& p, Complex c) {
    std::vector<Complex> work = p.coeffs();
    const std::size_t n = work.size();
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        // Synthetic division of the current quotient by (z - c).
        for (std::size_t j = n - 1; j > k; --j) work[j - 1] += c * work[j];
        out[k] = work[k];
    }
    return ComplexPolynomial(std::move(out));
}

/// First `count` Taylor coefficients of a(w)/b(w), b(0) != 0.
std::vector<Complex> series_divide(const ComplexPolynomial& a, const ComplexPolynomial& b, int count) {
    std::vector<Complex> c(static_cast<std::size_t>(count), Complex(0.0));
    const Complex b0 = b.coeff(0);
    for (int i = 0; i < count; ++i) {
        Complex acc = a.coeff(i);
        for (int j = 0; j < i; ++j) acc -= c[static_cast<std::size_t>(j)] * b.coeff(i - j);
        c[static_cast<std::size_t>(i)] = acc / b0;
    }
    return c;
}

} // namespace

Complex RationalEntry::eval(Complex z) const {
    const Complex dv = den(z);
    const double scale = std::max(poly_eval_scale(den, z), 1e-300);
    if (std::abs(dv) <= 1e-14 * scale)
        throw pole_error(z, "rational evaluation at a pole");
    return num(z) / dv;
}

Complex RationalEntry::derivative(Complex z) const {
    const Complex dv = den(z);
    const double scale = std::max(poly_eval_scale(den, z), 1e-300);
    if (std::abs(dv) <= 1e-14 * scale)
        throw pole_error(z, "rational derivative at a pole");
    return (num.derivative()(z) * dv - num(z) * den.derivative()(z)) / (dv * dv);
}

bool LaurentExpansion::has_polynomial_part(double tol) const {
    for (const auto& c : polynomial) {
        double s = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
        if (s > tol) return true;
    }
    return false;
}

CMatrix LaurentExpansion::poly_coeff(int degree) const {
    const int idx = degree - 1;
    if (idx < 0 || idx >= static_cast<int>(polynomial.size()))
        return CMatrix::Zero(tail.empty() ? 0 : tail[0].rows(), tail.empty() ? 0 : tail[0].cols());
    return polynomial[static_cast<std::size_t>(idx)];
}

MatrixFunction MatrixFunction::rational(std::vector<std::vector<RationalEntry>> entries) {
    MatrixFunction v;
    v.kind_ = Kind::Rational;
    v.dim_ = static_cast<int>(entries.size());
    for (auto& row : entries) {
        if (static_cast<int>(row.size()) != v.dim_)
            throw domain_error("rational matrix function must be square");
        for (auto& e : row) e.reduce();
    }
    v.entries_ = std::move(entries);
    return v;
}

MatrixFunction MatrixFunction::scalar_rational(ComplexPolynomial num, ComplexPolynomial den) {
    RationalEntry e{std::move(num), std::move(den)};
    return rational({{std::move(e)}});
}

MatrixFunction MatrixFunction::constant(const CMatrix& c) {
    std::vector<std::vector<RationalEntry>> entries(static_cast<std::size_t>(c.rows()));
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index j = 0; j < c.cols(); ++j)
            entries[static_cast<std::size_t>(i)].push_back(
                RationalEntry{ComplexPolynomial::constant(c(i, j)), ComplexPolynomial::constant(1.0)});
    return rational(std::move(entries));
}

MatrixFunction MatrixFunction::example1() {
    MatrixFunction v;
    v.kind_ = Kind::Builtin;
    v.builtin_ = BuiltinName::Example1;
    v.dim_ = 1;
    return v;
}

MatrixFunction MatrixFunction::example2(double gamma, double d) {
    if (gamma == 0.0) throw domain_error("example2 requires gamma != 0");
    MatrixFunction v;
    v.kind_ = Kind::Builtin;
    v.builtin_ = BuiltinName::Example2;
    v.gamma_ = gamma;
    v.d_ = d;
    v.dim_ = 1;
    return v;
}

MatrixFunction MatrixFunction::block_diag(std::vector<MatrixFunction> blocks) {
    if (blocks.empty()) throw domain_error("block_diag needs at least one block");
    MatrixFunction v;
    v.kind_ = Kind::BlockDiag;
    v.dim_ = 0;
    for (const auto& b : blocks) v.dim_ += b.dim();
    v.blocks_ = std::move(blocks);
    return v;
}

const RationalEntry& MatrixFunction::scalar_entry() const {
    if (kind_ != Kind::Rational || dim_ != 1)
        throw domain_error("scalar rational data expected");
    return entries_[0][0];
}

Complex sqrt_z2_minus_1(Complex z) {
    // Principal square roots of the two linear factors; the product is
    // holomorphic off [-1,1] and has positive imaginary part in C+.
    return std::sqrt(z - Complex(1.0)) * std::sqrt(z + Complex(1.0));
}

CMatrix MatrixFunction::eval_builtin(Complex z) const {
    CMatrix out(1, 1);
    if (builtin_ == BuiltinName::Example2) {
        if (std::abs(z.imag()) < 1e-12 && std::abs(z.real()) <= 1.0)
            throw pole_error(z, "example2 evaluated on the branch segment [-1,1]");
        const double g = gamma_ * gamma_;
        const Complex denom = (1.0 + 2.0 * g) * z - 2.0 * g * sqrt_z2_minus_1(z) - d_;
        if (std::abs(denom) < 1e-13 * (1.0 + std::abs(z)))
            throw pole_error(z, "example2 evaluated at its pole");
        out(0, 0) = Complex(1.0) / denom;
        return out;
    }
    // example1: V(z) = -cot(pi z) + 2/(pi z), evaluated through e^{±2 pi i z}
    // so the exponential never overflows in either half-plane.
    const double nearest = std::round(z.real());
    if (std::abs(z.imag()) < 1e-9 && std::abs(z.real() - nearest) < 1e-9)
        throw pole_error(Complex(nearest, 0.0), "example1 evaluated at an integer pole");
    Complex cot;
    if (z.imag() >= 0.0) {
        const Complex w = std::exp(Complex(0.0, 2.0 * kPi) * z);
        cot = kI * (w + 1.0) / (w - 1.0);
    } else {
        const Complex u = std::exp(Complex(0.0, -2.0 * kPi) * z);
        cot = kI * (1.0 + u) / (1.0 - u);
    }
    out(0, 0) = -cot + 2.0 / (kPi * z);
    return out;
}

CMatrix MatrixFunction::operator()(Complex z) const {
    switch (kind_) {
        case Kind::Rational: {
            CMatrix out(dim_, dim_);
            for (int i = 0; i < dim_; ++i)
                for (int j = 0; j < dim_; ++j)
                    out(i, j) = entries_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(z);
            return out;
        }
        case Kind::Builtin:
            return eval_builtin(z);
        case Kind::BlockDiag: {
            CMatrix out = CMatrix::Zero(dim_, dim_);
            int off = 0;
            for (const auto& b : blocks_) {
                out.block(off, off, b.dim(), b.dim()) = b(z);
                off += b.dim();
            }
            return out;
        }
    }
    throw domain_error("unreachable");
}

CMatrix eval(const MatrixFunction& v, Complex z) { return v(z); }

CMatrix derivative_eval(const MatrixFunction& v, Complex z) {
    if (v.kind() == MatrixFunction::Kind::Rational) {
        const int n = v.dim();
        CMatrix out(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out(i, j) = v.entries()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].derivative(z);
        return out;
    }
    if (v.kind() == MatrixFunction::Kind::BlockDiag) {
        CMatrix out = CMatrix::Zero(v.dim(), v.dim());
        int off = 0;
        for (const auto& b : v.blocks()) {
            out.block(off, off, b.dim(), b.dim()) = derivative_eval(b, z);
            off += b.dim();
        }
        return out;
    }
    // Central differences at shrinking steps with Richardson extrapolation.
    const double h0 = 1e-3 * std::max(1.0, std::abs(z));
    constexpr int kLevels = 4;
    std::vector<CMatrix> table(kLevels);
    double h = h0;
    for (int i = 0; i < kLevels; ++i) {
        table[static_cast<std::size_t>(i)] = (v(z + h) - v(z - h)) / (2.0 * h);
        h *= 0.5;
    }
    for (int j = 1; j < kLevels; ++j) {
        const double f = std::pow(4.0, j);
        for (int i = kLevels - 1; i >= j; --i)
            table[static_cast<std::size_t>(i)] =
                (f * table[static_cast<std::size_t>(i)] - table[static_cast<std::size_t>(i - 1)]) / (f - 1.0);
    }
    return table[kLevels - 1];
}

bool symmetry_check(const MatrixFunction& v) {
    switch (v.kind()) {
        case MatrixFunction::Kind::Builtin:
            return true;  // both builtins satisfy V(conj z) = conj(V(z)) by construction
        case MatrixFunction::Kind::BlockDiag: {
            for (const auto& b : v.blocks())
                if (!symmetry_check(b)) return false;
            return true;
        }
        case MatrixFunction::Kind::Rational: {
            const int n = v.dim();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const auto& eij = v.entries()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                    const auto& eji = v.entries()[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
                    // V_ij^sharp == V_ji as rational functions.
                    const ComplexPolynomial residual =
                        eij.num.sharp() * eji.den - eji.num * eij.den.sharp();
                    double scale = std::max({1e-300,
                                             eij.num.coeff_scale() * eji.den.coeff_scale(),
                                             eji.num.coeff_scale() * eij.den.coeff_scale()});
                    if (residual.coeff_scale() > 1e-10 * scale) return false;
                }
            return true;
        }
    }
    return false;
}

LaurentExpansion laurent_at_infinity(const MatrixFunction& v, int order) {
    if (v.kind() == MatrixFunction::Kind::BlockDiag) {
        LaurentExpansion out;
        int off = 0;
        for (const auto& b : v.blocks()) {
            LaurentExpansion le = laurent_at_infinity(b, order);
            const auto place = [&](std::vector<CMatrix>& dst, const std::vector<CMatrix>& src) {
                if (dst.size() < src.size()) dst.resize(src.size(), CMatrix::Zero(v.dim(), v.dim()));
                for (auto& m : dst)
                    if (m.rows() != v.dim()) m = CMatrix::Zero(v.dim(), v.dim());
                for (std::size_t k = 0; k < src.size(); ++k)
                    dst[k].block(off, off, b.dim(), b.dim()) = src[k];
            };
            place(out.polynomial, le.polynomial);
            place(out.tail, le.tail);
            off += b.dim();
        }
        if (out.tail.empty()) out.tail.resize(static_cast<std::size_t>(order) + 1, CMatrix::Zero(v.dim(), v.dim()));
        return out;
    }
    if (v.kind() != MatrixFunction::Kind::Rational)
        throw domain_error("laurent_at_infinity: unsupported representation (rational data required)");

    const int n = v.dim();
    LaurentExpansion out;
    out.tail.assign(static_cast<std::size_t>(order) + 1, CMatrix::Zero(n, n));
    int max_poly_deg = 0;
    std::vector<std::vector<ComplexPolynomial>> quotients(static_cast<std::size_t>(n),
                                                          std::vector<ComplexPolynomial>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& e = v.entries()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            auto [q, r] = e.num.divmod(e.den);
            quotients[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = q;
            max_poly_deg = std::max(max_poly_deg, q.degree());
            out.tail[0](i, j) = q.coeff(0);
            // Expand r/den in descending powers of z.
            const int dd = e.den.degree();
            if (dd == 0) continue;
            std::vector<Complex> rem(static_cast<std::size_t>(dd), Complex(0.0));
            for (int k = 0; k < dd; ++k) rem[static_cast<std::size_t>(k)] = r.coeff(k);
            const Complex lead = e.den.coeff(dd);
            for (int k = 1; k <= order; ++k) {
                const Complex ck = rem[static_cast<std::size_t>(dd - 1)] / lead;
                out.tail[static_cast<std::size_t>(k)](i, j) = ck;
                std::vector<Complex> next(static_cast<std::size_t>(dd), Complex(0.0));
                for (int m = 0; m < dd; ++m) {
                    Complex zr = (m >= 1) ? rem[static_cast<std::size_t>(m - 1)] : Complex(0.0);
                    next[static_cast<std::size_t>(m)] = zr - ck * e.den.coeff(m);
                }
                rem = std::move(next);
            }
        }
    out.polynomial.assign(static_cast<std::size_t>(std::max(max_poly_deg, 0)), CMatrix::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int kdeg = 1; kdeg <= max_poly_deg; ++kdeg)
                out.polynomial[static_cast<std::size_t>(kdeg - 1)](i, j) =
                    quotients[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].coeff(kdeg);
    return out;
}

std::vector<std::pair<Complex, int>> rational_poles(const MatrixFunction& v) {
    if (v.kind() == MatrixFunction::Kind::BlockDiag) {
        std::vector<std::pair<Complex, int>> all;
        for (const auto& b : v.blocks()) {
            auto sub = rational_poles(b);
            for (const auto& [p, m] : sub) {
                bool merged = false;
                for (auto& [q, mm] : all)
                    if (std::abs(q - p) <= 1e-8 * (1.0 + std::abs(q))) {
                        mm = std::max(mm, m);
                        merged = true;
                        break;
                    }
                if (!merged) all.emplace_back(p, m);
            }
        }
        return all;
    }
    if (v.kind() != MatrixFunction::Kind::Rational)
        throw domain_error("rational_poles: rational data required");
    std::vector<std::pair<Complex, int>> all;
    for (const auto& row : v.entries())
        for (const auto& e : row) {
            if (e.den.degree() == 0) continue;
            for (const auto& [p, m] : clustered_roots(e.den)) {
                bool merged = false;
                for (auto& [q, mm] : all)
                    if (std::abs(q - p) <= 1e-8 * (1.0 + std::abs(q))) {
                        mm = std::max(mm, m);
                        merged = true;
                        break;
                    }
                if (!merged) all.emplace_back(p, m);
            }
        }
    return all;
}

std::vector<PartialFractionTerm> partial_fractions(const MatrixFunction& v) {
    if (v.kind() != MatrixFunction::Kind::Rational)
        throw domain_error("partial_fractions: rational data required");
    const int n = v.dim();
    for (const auto& row : v.entries())
        for (const auto& e : row)
            if (!e.is_zero() && e.num.degree() >= e.den.degree())
                throw domain_error("partial_fractions: input must be strictly proper");

    std::vector<PartialFractionTerm> terms;
    auto term_for = [&](Complex pole, int order) -> PartialFractionTerm& {
        for (auto& t : terms)
            if (std::abs(t.pole - pole) <= 1e-8 * (1.0 + std::abs(pole))) {
                if (order > t.order) {
                    t.order = order;
                    t.coeffs.resize(static_cast<std::size_t>(order), CMatrix::Zero(n, n));
                }
                return t;
            }
        terms.push_back(PartialFractionTerm{pole, order,
                                            std::vector<CMatrix>(static_cast<std::size_t>(order), CMatrix::Zero(n, n))});
        return terms.back();
    };

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& e = v.entries()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (e.is_zero() || e.den.degree() == 0) continue;
            const auto clusters = clustered_roots(e.den);
            for (const auto& [pole, mult] : clusters) {
                // g(w) = num(pole+w) / [lead * prod_{other} (pole+w-p_l)^{m_l}],
                // Taylor coefficients give the principal-part coefficients.
                ComplexPolynomial rest = ComplexPolynomial::constant(e.den.leading());
                for (const auto& [other, om] : clusters) {
                    if (std::abs(other - pole) <= 1e-12 * (1.0 + std::abs(pole))) continue;
                    ComplexPolynomial lin({pole - other, Complex(1.0)});
                    for (int t = 0; t < om; ++t) rest = rest * lin;
                }
                const ComplexPolynomial num_sh = taylor_shift(e.num, pole);
                const std::vector<Complex> g = series_divide(num_sh, rest, mult);
                auto& term = term_for(pole, mult);
                for (int t = 0; t < mult; ++t) {
                    // g[t] multiplies w^{t-mult} = 1/(z-pole)^{mult-t}.
                    const int power = mult - t;
                    term.coeffs[static_cast<std::size_t>(power - 1)](i, j) += g[static_cast<std::size_t>(t)];
                }
            }
        }

    // Drop vanishing leading coefficients (cancellations between entries).
    for (auto& t : terms) {
        while (t.order > 1 && t.coeffs[static_cast<std::size_t>(t.order - 1)].cwiseAbs().maxCoeff() < 1e-12) {
            t.coeffs.pop_back();
            --t.order;
        }
    }
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        if (a.pole.real() != b.pole.real()) return a.pole.real() < b.pole.real();
        return a.pole.imag() < b.pole.imag();
    });
    return terms;
}

MatrixFunction MatrixFunction::times_fraction(const ComplexPolynomial& a, const ComplexPolynomial& b) const {
    const auto& e = scalar_entry();
    return scalar_rational(e.num * a, e.den * b);
}

MatrixFunction MatrixFunction::plus_real_constant(double c) const {
    if (kind_ == Kind::Rational) {
        auto entries = entries_;
        for (int i = 0; i < dim_; ++i) {
            auto& e = entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
            e.num = e.num + e.den * Complex(c);
        }
        return rational(std::move(entries));
    }
    throw domain_error("plus_real_constant: rational data required");
}

std::string MatrixFunction::describe() const {
    switch (kind_) {
        case Kind::Rational:
            return "rational(" + std::to_string(dim_) + "x" + std::to_string(dim_) + ")";
        case Kind::Builtin:
            return builtin_ == BuiltinName::Example1
                       ? "example1"
                       : "example2(gamma=" + std::to_string(gamma_) + ", d=" + std::to_string(d_) + ")";
        case Kind::BlockDiag:
            return "blockdiag(" + std::to_string(blocks_.size()) + " blocks)";
    }
    return {};
}

} // namespace nkappa
