#pragma once

#include <string>
#include <vector>

#include "nkappa/polynomial.hpp"

namespace nkappa {

/// One rational matrix entry num/den, kept coprime with monic denominator.
struct RationalEntry {
    ComplexPolynomial num;
    ComplexPolynomial den = ComplexPolynomial::constant(Complex(1.0));

    void reduce() { reduce_fraction(num, den); }
    Complex eval(Complex z) const;       // throws pole_error at a zero of den
    Complex derivative(Complex z) const;
    bool is_zero() const { return num.is_zero(); }
};

/// V(z) = polynomial part (degrees >= 1) + C0 + C1/z + C2/z^2 + ...
/// polynomial[k] is the matrix coefficient of z^{k+1}; tail[k] is C_k.
struct LaurentExpansion {
    std::vector<CMatrix> polynomial;
    std::vector<CMatrix> tail;

    bool has_polynomial_part(double tol = 1e-12) const;
    CMatrix poly_coeff(int degree) const;  // degree >= 1
    CMatrix c(int k) const { return tail.at(static_cast<std::size_t>(k)); }
};

struct PartialFractionTerm {
    Complex pole;
    int order = 1;
    std::vector<CMatrix> coeffs;  // coeffs[j] multiplies 1/(z - pole)^{j+1}
};

/// Symmetric meromorphic matrix-valued function: a dense matrix of rational
/// entries, a named builtin, or a block-diagonal composition.
class MatrixFunction {
public:
    enum class Kind { Rational, Builtin, BlockDiag };
    enum class BuiltinName { Example1, Example2 };

    MatrixFunction() : entries_{{RationalEntry{}}} {}  // the scalar zero function

    static MatrixFunction rational(std::vector<std::vector<RationalEntry>> entries);
    static MatrixFunction scalar_rational(ComplexPolynomial num, ComplexPolynomial den);
    static MatrixFunction constant(const CMatrix& c);
    static MatrixFunction example1();
    static MatrixFunction example2(double gamma, double d);
    static MatrixFunction block_diag(std::vector<MatrixFunction> blocks);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool is_scalar() const { return dim_ == 1; }
    bool is_rational() const { return kind_ == Kind::Rational; }

    const std::vector<std::vector<RationalEntry>>& entries() const { return entries_; }
    const RationalEntry& scalar_entry() const;
    BuiltinName builtin_name() const { return builtin_; }
    double gamma() const { return gamma_; }
    double d() const { return d_; }
    const std::vector<MatrixFunction>& blocks() const { return blocks_; }

    CMatrix operator()(Complex z) const;

    /// Scalar-rational convenience: V * (a/b), reduced.
    MatrixFunction times_fraction(const ComplexPolynomial& a, const ComplexPolynomial& b) const;
    /// V + c*I for real c (leaves the Nevanlinna kernel unchanged).
    MatrixFunction plus_real_constant(double c) const;

    std::string describe() const;

private:
    Kind kind_ = Kind::Rational;
    int dim_ = 1;
    std::vector<std::vector<RationalEntry>> entries_;
    BuiltinName builtin_ = BuiltinName::Example1;
    double gamma_ = 1.0, d_ = 0.0;
    std::vector<MatrixFunction> blocks_;

    CMatrix eval_builtin(Complex z) const;
};

CMatrix eval(const MatrixFunction& v, Complex z);

/// Exact differentiation for rational data; Richardson-extrapolated central
/// differences for builtins (relative error target 1e-9).
CMatrix derivative_eval(const MatrixFunction& v, Complex z);

/// True iff V(conj z) = V(z)* identically. Decided exactly on coefficients
/// for rational data, structurally for the builtins.
bool symmetry_check(const MatrixFunction& v);

/// Expansion at infinity by long division; rational inputs only.
LaurentExpansion laurent_at_infinity(const MatrixFunction& v, int order);

/// Pole expansion of a strictly proper rational function.
std::vector<PartialFractionTerm> partial_fractions(const MatrixFunction& v);

/// Branch of sqrt(z^2-1) with Im > 0 on the upper half-plane, extended by
/// conjugation symmetry to the lower half-plane.
Complex sqrt_z2_minus_1(Complex z);

/// Poles of a rational function (clustered roots of the reduced denominators,
/// merged across entries).
std::vector<std::pair<Complex, int>> rational_poles(const MatrixFunction& v);

} // namespace nkappa
