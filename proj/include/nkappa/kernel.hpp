#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nkappa/indefinite.hpp"
#include "nkappa/matrix_function.hpp"

namespace nkappa {

struct KernelConfig {
    int grid_start = 12;
    int grid_max = 384;
    std::uint64_t seed = 0x4E4B;
    double tol = 1e-10;
};

struct KernelGram {
    std::vector<Complex> points;
    std::vector<CVector> directions;
    CMatrix gram;
    Inertia inert;
};

struct GridStep {
    int size = 0;
    int negative = 0;
    int rank = 0;
    int ambiguous_negative = 0;
    int ambiguous_rank = 0;
};

struct KappaEstimate {
    int kappa = 0;
    bool stabilized = false;
    std::vector<GridStep> history;
    std::string grids_used;
};

struct RankEstimate {
    int rank = 0;
    bool stabilized = false;
    std::vector<GridStep> history;
};

/// (V(zeta) - V(z)*)/(zeta - conj z); on the coincident-conjugate set
/// zeta = conj z the analytic continuation V'(conj z).
CMatrix kernel_value(const MatrixFunction& v, Complex z, Complex zeta);

/// Hermitian Gram with entries h_j^* N(z_j, z_k) h_k.
KernelGram gram_matrix(const MatrixFunction& v, const std::vector<Complex>& points,
                       const std::vector<CVector>& directions);

/// Negative-square count stabilized over grids of doubling size; flagged
/// (stabilized = false), never silent, when the budget runs out.
KappaEstimate negative_squares(const MatrixFunction& v, const KernelConfig& config = {});

/// Stabilized rank (n_plus + n_minus) of the same Gram sequence.
RankEstimate kernel_rank(const MatrixFunction& v, const KernelConfig& config = {});

/// True iff the stacked kernel matrices over the point set have trivial
/// common null space.
bool strictness_check(const MatrixFunction& v, const std::vector<Complex>& points);

/// Deterministic upper-half-plane sample points, filtered away from poles.
std::vector<Complex> sample_points(const MatrixFunction& v, int count, std::uint64_t seed,
                                   double value_cap = 1e3);

std::vector<Complex> default_strictness_points(const MatrixFunction& v);

} // namespace nkappa
