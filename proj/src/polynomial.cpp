#include "nkappa/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "nkappa/errors.hpp"

namespace nkappa {

ComplexPolynomial::ComplexPolynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(Complex(0.0));
    trim();
}

void ComplexPolynomial::trim() {
    // Exact-zero trim only; callers use cleaned() for tolerance-based cleanup.
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) == 0.0) coeffs_.pop_back();
}

ComplexPolynomial ComplexPolynomial::variable() { return ComplexPolynomial({Complex(0.0), Complex(1.0)}); }

ComplexPolynomial ComplexPolynomial::from_roots(const std::vector<Complex>& roots, Complex leading) {
    ComplexPolynomial p = constant(leading);
    for (const auto& r : roots) p = p * ComplexPolynomial({-r, Complex(1.0)});
    return p;
}

bool ComplexPolynomial::is_zero() const {
    return coeffs_.size() == 1 && coeffs_[0] == Complex(0.0);
}

Complex ComplexPolynomial::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Complex(0.0);
    return coeffs_[static_cast<std::size_t>(k)];
}

double ComplexPolynomial::coeff_scale() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s = std::max(s, std::abs(c));
    return s;
}

Complex ComplexPolynomial::operator()(Complex z) const {
    Complex acc(0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

ComplexPolynomial ComplexPolynomial::derivative() const {
    if (degree() == 0) return ComplexPolynomial();
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = double(k) * coeffs_[k];
    return ComplexPolynomial(std::move(d));
}

ComplexPolynomial ComplexPolynomial::sharp() const {
    std::vector<Complex> c(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] = std::conj(coeffs_[k]);
    return ComplexPolynomial(std::move(c));
}

bool ComplexPolynomial::has_real_coeffs(double tol) const {
    const double s = std::max(1.0, coeff_scale());
    for (const auto& c : coeffs_)
        if (std::abs(c.imag()) > tol * s) return false;
    return true;
}

ComplexPolynomial ComplexPolynomial::operator+(const ComplexPolynomial& o) const {
    std::vector<Complex> c(std::max(coeffs_.size(), o.coeffs_.size()), Complex(0.0));
    for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) c[k] += o.coeffs_[k];
    return ComplexPolynomial(std::move(c));
}

ComplexPolynomial ComplexPolynomial::operator-(const ComplexPolynomial& o) const {
    return *this + o * Complex(-1.0);
}

ComplexPolynomial ComplexPolynomial::operator*(const ComplexPolynomial& o) const {
    if (is_zero() || o.is_zero()) return ComplexPolynomial();
    std::vector<Complex> c(coeffs_.size() + o.coeffs_.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
    return ComplexPolynomial(std::move(c));
}

ComplexPolynomial ComplexPolynomial::operator*(Complex s) const {
    std::vector<Complex> c(coeffs_);
    for (auto& x : c) x *= s;
    return ComplexPolynomial(std::move(c));
}

std::pair<ComplexPolynomial, ComplexPolynomial> ComplexPolynomial::divmod(
    const ComplexPolynomial& divisor) const {
    if (divisor.is_zero()) throw domain_error("polynomial division by zero");
    const int dn = degree(), dd = divisor.degree();
    if (dn < dd || is_zero()) return {ComplexPolynomial(), *this};
    std::vector<Complex> rem(coeffs_);
    std::vector<Complex> quot(static_cast<std::size_t>(dn - dd) + 1, Complex(0.0));
    const Complex lead = divisor.leading();
    for (int k = dn - dd; k >= 0; --k) {
        Complex q = rem[static_cast<std::size_t>(k + dd)] / lead;
        quot[static_cast<std::size_t>(k)] = q;
        for (int j = 0; j <= dd; ++j)
            rem[static_cast<std::size_t>(k + j)] -= q * divisor.coeffs_[static_cast<std::size_t>(j)];
    }
    rem.resize(static_cast<std::size_t>(std::max(dd, 1)));
    return {ComplexPolynomial(std::move(quot)), ComplexPolynomial(std::move(rem)).cleaned(1e-14)};
}

ComplexPolynomial ComplexPolynomial::monic() const {
    if (is_zero()) return *this;
    return *this * (Complex(1.0) / leading());
}

ComplexPolynomial ComplexPolynomial::deflate(Complex root) const {
    const int d = degree();
    if (d < 1) return ComplexPolynomial();
    std::vector<Complex> q(static_cast<std::size_t>(d), Complex(0.0));
    Complex carry = coeffs_[static_cast<std::size_t>(d)];
    for (int k = d - 1; k >= 0; --k) {
        q[static_cast<std::size_t>(k)] = carry;
        carry = coeffs_[static_cast<std::size_t>(k)] + root * carry;
    }
    return ComplexPolynomial(std::move(q));
}

ComplexPolynomial ComplexPolynomial::cleaned(double tol) const {
    const double s = coeff_scale();
    if (s == 0.0) return ComplexPolynomial();
    std::vector<Complex> c(coeffs_);
    for (auto& x : c) {
        double re = std::abs(x.real()) <= tol * s ? 0.0 : x.real();
        double im = std::abs(x.imag()) <= tol * s ? 0.0 : x.imag();
        x = Complex(re, im);
    }
    return ComplexPolynomial(std::move(c));
}

std::vector<Complex> poly_roots(const ComplexPolynomial& p) {
    if (p.is_zero()) throw domain_error("poly_roots: zero polynomial");
    const int n = p.degree();
    if (n == 0) return {};
    // Companion matrix of the monic polynomial, then one guarded Newton step.
    const ComplexPolynomial m = p.monic();
    CMatrix comp = CMatrix::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -m.coeff(i);
    Eigen::ComplexEigenSolver<CMatrix> es(comp, /*computeEigenvectors=*/false);
    const ComplexPolynomial dp = p.derivative();
    std::vector<Complex> roots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Complex r = es.eigenvalues()(i);
        const Complex pv = p(r);
        const Complex dv = dp(r);
        // Evaluation noise floor at r; residuals below it carry no signal
        // (typical at multiple roots), so the Newton step would only inject
        // noise amplified by 1/p'(r).
        double floor_at_r = 0.0, rk = 1.0;
        for (int k = 0; k <= m.degree(); ++k) {
            floor_at_r += std::abs(m.coeff(k)) * rk;
            rk *= std::abs(r);
        }
        floor_at_r *= 1e-14;
        if (std::abs(dv) > 0.0 && std::abs(pv) > 50.0 * floor_at_r * std::abs(p.leading())) {
            const Complex cand = r - pv / dv;
            if (std::abs(p(cand)) < 0.1 * std::abs(pv)) r = cand;
        }
        roots[static_cast<std::size_t>(i)] = r;
    }
    return roots;
}

std::vector<std::pair<Complex, int>> clustered_roots(const ComplexPolynomial& p, double cluster_tol) {
    std::vector<Complex> roots = poly_roots(p);
    double scale = 1.0;
    for (const auto& r : roots) scale = std::max(scale, std::abs(r));
    const double tol = cluster_tol * scale;
    std::vector<bool> used(roots.size(), false);
    std::vector<std::pair<Complex, int>> clusters;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        Complex sum = roots[i];
        int count = 1;
        used[i] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            Complex center = sum / double(count);
            for (std::size_t j = 0; j < roots.size(); ++j) {
                if (used[j]) continue;
                if (std::abs(roots[j] - center) <= tol) {
                    sum += roots[j];
                    ++count;
                    used[j] = true;
                    grew = true;
                }
            }
        }
        clusters.emplace_back(sum / double(count), count);
    }
    std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
        if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
        return a.first.imag() < b.first.imag();
    });
    return clusters;
}

int approx_gcd_degree(const ComplexPolynomial& p, const ComplexPolynomial& q, double tol) {
    if (p.is_zero() || q.is_zero()) throw domain_error("approx_gcd_degree: zero polynomial");
    const int dp = p.degree(), dq = q.degree();
    if (dp == 0 || dq == 0) return 0;
    const int n = dp + dq;
    // Sylvester matrix of the two (scale-normalized) polynomials.
    const ComplexPolynomial pn = p * Complex(1.0 / p.coeff_scale());
    const ComplexPolynomial qn = q * Complex(1.0 / q.coeff_scale());
    CMatrix s = CMatrix::Zero(n, n);
    for (int row = 0; row < dq; ++row)
        for (int k = 0; k <= dp; ++k) s(row, row + k) = pn.coeff(dp - k);
    for (int row = 0; row < dp; ++row)
        for (int k = 0; k <= dq; ++k) s(dq + row, row + k) = qn.coeff(dq - k);
    Eigen::JacobiSVD<CMatrix> svd(s);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++rank;
    return n - rank;
}

void reduce_fraction(ComplexPolynomial& num, ComplexPolynomial& den) {
    if (den.is_zero()) throw domain_error("reduce_fraction: zero denominator");
    if (num.is_zero()) {
        den = ComplexPolynomial::constant(Complex(1.0));
        return;
    }
    int left = (num.degree() > 0 && den.degree() > 0) ? approx_gcd_degree(num, den) : 0;
    if (left > 0) {
        // Cancel at cluster means: deflating a multiple root at its cluster
        // mean keeps the cofactor accurate where individual (split) roots
        // would leave O(sqrt(eps)) residue.
        auto cn = clustered_roots(num);
        auto cd = clustered_roots(den);
        while (left > 0) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t bi = 0, bj = 0;
            for (std::size_t i = 0; i < cn.size(); ++i)
                for (std::size_t j = 0; j < cd.size(); ++j) {
                    if (cn[i].second == 0 || cd[j].second == 0) continue;
                    const double dist = std::abs(cn[i].first - cd[j].first);
                    if (dist < best) { best = dist; bi = i; bj = j; }
                }
            if (!std::isfinite(best)) break;
            if (best > 1e-4 * (1.0 + std::abs(cd[bj].first))) break;  // Sylvester over-counted
            const int k = std::min({cn[bi].second, cd[bj].second, left});
            for (int t = 0; t < k; ++t) {
                num = num.deflate(cn[bi].first);
                den = den.deflate(cd[bj].first);
            }
            cn[bi].second -= k;
            cd[bj].second -= k;
            left -= k;
        }
    }
    const Complex lead = den.leading();
    den = (den * (Complex(1.0) / lead)).cleaned();
    num = (num * (Complex(1.0) / lead)).cleaned();
}

} // namespace nkappa
