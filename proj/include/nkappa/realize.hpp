#pragma once

#include <string>
#include <vector>

#include "nkappa/classify.hpp"
#include "nkappa/colligation.hpp"

namespace nkappa {

struct RealizeConfig {
    KernelConfig kernel;
    double cond_max = 1e10;
    int retries = 5;
    Complex circle_center = Complex(0.0, 2.0);
    double circle_radius = 1.0;
};

/// Intermediate data of the reproducing-kernel construction: kernel sections
/// at the sample points, the selected difference basis with its indefinite
/// Gram, and the operators expressed in that basis.
struct RKModel {
    std::vector<Complex> sample_points;  // z_0 ... z_P-1 on the sampling circle
    CMatrix gram;          // pairings [gamma(z_a)e_h, gamma(z_b)e_g], (P m)^2
    CMatrix basis;         // columns: state basis in scaled difference coordinates
    CMatrix state_metric;  // diagonal, inertia (n - kappa, 0, kappa), no zeros
    CMatrix av;            // multiplication extension in the chosen basis
    CMatrix kmat;          // channel coordinates (n x m)
};

struct RoundtripReport {
    double max_impedance_rel_err = 0.0;
    Complex worst_point;
    double kernel_identity_residual = 0.0;
    bool minimal = false;
    int kappa_metric = 0;
    int kappa_kernel = 0;
    bool kappa_agree = false;
    bool pass = false;
    int points_used = 0;
};

/// Minimal state dimension. Scalar rational: coprime denominator degree;
/// block-diagonal: sum over blocks; otherwise the stabilized kernel rank.
int mcmillan_degree(const MatrixFunction& v, const RealizeConfig& config = {});

/// Reproducing-kernel construction of a minimal realization: state space
/// spanned by differences of kernel sections at sample points, multiplication
/// action recovered from the Gram data, channel from the consistency relation.
Colligation realize_rkps(const MatrixFunction& v, const RealizeConfig& config = {});

/// Same construction, stopping at the basis/operator data.
RKModel realize_model(const MatrixFunction& v, const RealizeConfig& config = {});

/// Independent oracle: pole-by-pole assembly from partial fractions
/// (1-dim blocks for sign-definite simple poles, flip-metric Jordan blocks
/// for the rest, paired blocks for conjugate pole pairs).
Colligation pf_realize(const MatrixFunction& v);

RoundtripReport roundtrip_verify(const MatrixFunction& v, const Colligation& c,
                                 const std::vector<Complex>& points, double tol,
                                 const KernelConfig& kernel_config = {});

std::vector<Complex> holdout_points(const MatrixFunction& v, int count, std::uint64_t seed);

} // namespace nkappa
