#pragma once

#include <string>
#include <vector>

#include "nkappa/classify.hpp"

namespace nkappa {

struct FactorizeConfig {
    KernelConfig kernel;
    int check_points = 50;
    double check_tol = 1e-8;
    bool per_candidate_diagnostics = true;
};

struct NonposPoint {
    Complex location;       // meaningless when at_infinity
    bool at_infinity = false;
    enum class Kind { Pole, Zero } kind = Kind::Pole;
    int multiplicity = 0;   // 0 for the infinity flag
    int kappa_after_strip = -1;  // diagnostic: kappa of V with this candidate stripped alone
};

/// V = (p p_sharp / q q_sharp) V0 with V0 of nonnegative type,
/// p, q monic and coprime, kappa = max(deg p, deg q).
struct Factorization {
    ComplexPolynomial p;
    ComplexPolynomial q;
    MatrixFunction v0;
    int kappa = 0;
    std::vector<NonposPoint> points;
    std::vector<std::string> log;  // fast-path vs oracle disagreements etc.
};

struct RealizabilityRoute {
    bool realizable = false;
    std::string route;
    int deg_p = 0, deg_q = 0;
};

/// Candidate generalized poles/zeros of nonpositive type of a scalar
/// symmetric function (finite candidates plus the infinity flag).
std::vector<NonposPoint> nonpos_points(const MatrixFunction& v, const FactorizeConfig& config = {});

Factorization factorize(const MatrixFunction& v, const FactorizeConfig& config = {});

/// Degree-comparison route: deg p > deg q rules realization out, deg p < deg q
/// rules it in, equal degrees fall back to whether V0 is realizable.
RealizabilityRoute realizability_route(const MatrixFunction& v, const FactorizeConfig& config = {});

} // namespace nkappa
