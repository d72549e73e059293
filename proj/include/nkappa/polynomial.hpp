#pragma once

#include <utility>
#include <vector>

#include "nkappa/linalg.hpp"

namespace nkappa {

/// Complex polynomial with coefficients stored in ascending degree and
/// trailing zeros trimmed, so coeffs.back() is the leading coefficient
/// unless the polynomial is identically zero (empty-equivalent: {0}).
class ComplexPolynomial {
public:
    ComplexPolynomial() : coeffs_{Complex(0.0)} {}
    explicit ComplexPolynomial(std::vector<Complex> coeffs);
    static ComplexPolynomial constant(Complex c) { return ComplexPolynomial({c}); }
    static ComplexPolynomial variable();  // p(z) = z
    static ComplexPolynomial from_roots(const std::vector<Complex>& roots,
                                        Complex leading = Complex(1.0));

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const;
    bool is_constant() const { return degree() == 0; }
    Complex leading() const { return coeffs_.back(); }
    const std::vector<Complex>& coeffs() const { return coeffs_; }
    Complex coeff(int k) const;
    double coeff_scale() const;  // max |coefficient|

    Complex operator()(Complex z) const;
    ComplexPolynomial derivative() const;

    /// Involution p♯(z) = conj(p(conj z)): conjugates every coefficient.
    ComplexPolynomial sharp() const;
    bool has_real_coeffs(double tol = 1e-12) const;

    ComplexPolynomial operator+(const ComplexPolynomial& o) const;
    ComplexPolynomial operator-(const ComplexPolynomial& o) const;
    ComplexPolynomial operator*(const ComplexPolynomial& o) const;
    ComplexPolynomial operator*(Complex s) const;
    bool operator==(const ComplexPolynomial& o) const { return coeffs_ == o.coeffs_; }

    /// Long division: returns {quotient, remainder} with deg r < deg divisor.
    std::pair<ComplexPolynomial, ComplexPolynomial> divmod(const ComplexPolynomial& divisor) const;

    ComplexPolynomial monic() const;

    /// Removes a linear factor (z - root) by synthetic division; the root is
    /// assumed accurate, the remainder is discarded.
    ComplexPolynomial deflate(Complex root) const;

    /// Drops coefficients below tol * coeff_scale() (re and im independently).
    ComplexPolynomial cleaned(double tol = 1e-13) const;

private:
    std::vector<Complex> coeffs_;
    void trim();
};

/// All roots via companion-matrix eigenvalues with one guarded Newton polish
/// step per root. Throws domain_error on the zero polynomial.
std::vector<Complex> poly_roots(const ComplexPolynomial& p);

/// Roots grouped into multiplicity clusters; each cluster is replaced by its
/// mean (which restores accuracy lost to root ill-conditioning).
std::vector<std::pair<Complex, int>> clustered_roots(const ComplexPolynomial& p,
                                                     double cluster_tol = 2e-5);

/// Degree of the approximate GCD, read off the Sylvester matrix rank with a
/// singular-value threshold of 1e-10 relative.
int approx_gcd_degree(const ComplexPolynomial& p, const ComplexPolynomial& q,
                      double tol = 1e-10);

/// Cancels common (numerically matched) roots so num/den is coprime and den
/// monic. The Sylvester rank decides how many factors to cancel.
void reduce_fraction(ComplexPolynomial& num, ComplexPolynomial& den);

} // namespace nkappa
