#include "nkappa/kernel.hpp"

#include <cmath>
#include <sstream>

#include "nkappa/errors.hpp"

namespace nkappa {

namespace {

// Guard band: eigenvalues below -margin*tau count as negative, values in
// [-margin*tau, -tau) are ambiguous and force grid refinement.
constexpr double kNegMargin = 1e3;
constexpr double kRankMargin = 30.0;

struct BandCounts {
    int negative = 0;
    int rank = 0;
    int ambiguous_neg = 0;
    int ambiguous_rank = 0;
};

BandCounts band_counts(const CMatrix& gram, double tol) {
    BandCounts out;
    const int n = static_cast<int>(gram.rows());
    if (n == 0) return out;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm_part(gram), Eigen::EigenvaluesOnly);
    const double tau = tol * n * std::max(1.0, spectral_norm(gram));
    for (int i = 0; i < n; ++i) {
        const double ev = es.eigenvalues()(i);
        if (ev < -kNegMargin * tau)
            ++out.negative;
        else if (ev < -tau)
            ++out.ambiguous_neg;
        if (std::abs(ev) > kRankMargin * tau)
            ++out.rank;
        else if (std::abs(ev) > tau)
            ++out.ambiguous_rank;
    }
    return out;
}

std::vector<CVector> direction_stream(int dim, int count, Rng& rng) {
    std::vector<CVector> out;
    out.reserve(static_cast<std::size_t>(count));
    if (dim == 1) {
        out.assign(static_cast<std::size_t>(count), CVector::Ones(1));
        return out;
    }
    int basis_idx = 0;
    while (static_cast<int>(out.size()) < count) {
        if (basis_idx < dim) {
            CVector e = CVector::Zero(dim);
            e(basis_idx++) = 1.0;
            out.push_back(std::move(e));
        } else {
            out.push_back(rng.unit_vector(dim));
            basis_idx = 0;
        }
    }
    return out;
}

} // namespace

CMatrix kernel_value(const MatrixFunction& v, Complex z, Complex zeta) {
    const Complex zb = std::conj(z);
    if (zeta == zb || std::abs(zeta - zb) < 1e-12)
        return derivative_eval(v, zb);
    return (v(zeta) - v(z).adjoint()) / (zeta - zb);
}

KernelGram gram_matrix(const MatrixFunction& v, const std::vector<Complex>& points,
                       const std::vector<CVector>& directions) {
    if (points.size() != directions.size())
        throw domain_error("gram_matrix: one direction per point required");
    const int p = static_cast<int>(points.size());
    KernelGram out;
    out.points = points;
    out.directions = directions;
    out.gram = CMatrix::Zero(p, p);
    for (int j = 0; j < p; ++j)
        for (int k = 0; k <= j; ++k) {
            const CMatrix nv = kernel_value(v, points[static_cast<std::size_t>(j)],
                                            points[static_cast<std::size_t>(k)]);
            const Complex val = directions[static_cast<std::size_t>(j)].dot(
                nv * directions[static_cast<std::size_t>(k)]);
            out.gram(j, k) = val;
            out.gram(k, j) = std::conj(val);
        }
    out.inert = p > 0 ? inertia(out.gram) : Inertia{};
    return out;
}

std::vector<Complex> sample_points(const MatrixFunction& v, int count, std::uint64_t seed,
                                   double value_cap) {
    // First a deterministic Weyl lattice over [-5,5] x i[0.1,10] (log-spaced
    // heights), then seeded randoms from the same rectangle.
    constexpr double kPhi = 0.6180339887498949;
    constexpr double kPhi2 = 0.7548776662466927 * 0.7548776662466927;
    Rng rng(seed);
    std::vector<Complex> pts;
    pts.reserve(static_cast<std::size_t>(count));
    int lattice_idx = 0, tries = 0;
    const int lattice_budget = count / 2;
    while (static_cast<int>(pts.size()) < count && tries < 50 * count + 200) {
        ++tries;
        Complex z;
        if (lattice_idx < lattice_budget) {
            const double fx = std::fmod(0.5 + kPhi * lattice_idx, 1.0);
            const double fy = std::fmod(0.25 + kPhi2 * lattice_idx, 1.0);
            z = Complex(-5.0 + 10.0 * fx, 0.1 * std::pow(100.0, fy));
            ++lattice_idx;
        } else {
            z = Complex(rng.uniform(-5.0, 5.0), 0.1 * std::pow(100.0, rng.uniform(0.0, 1.0)));
        }
        try {
            if (v(z).cwiseAbs().maxCoeff() > value_cap) continue;
        } catch (const pole_error&) {
            continue;
        }
        bool dup = false;
        for (const auto& q : pts)
            if (std::abs(q - z) < 1e-9) { dup = true; break; }
        if (!dup) pts.push_back(z);
    }
    return pts;
}

namespace {

struct StabilizationRun {
    std::vector<GridStep> history;
    bool kappa_stable = false;
    bool rank_stable = false;
    int kappa = 0;
    int rank = 0;
    std::string description;
};

enum class Need { Kappa, Rank };

StabilizationRun run_grids(const MatrixFunction& v, const KernelConfig& config, Need need) {
    if (!symmetry_check(v)) throw domain_error("kernel grids require a symmetric function");
    StabilizationRun run;
    Rng dir_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
    const std::vector<Complex> all_points = sample_points(v, config.grid_max, config.seed);
    const std::vector<CVector> all_dirs =
        direction_stream(v.dim(), static_cast<int>(all_points.size()), dir_rng);
    std::ostringstream desc;
    desc << "weyl+seeded rectangle [-5,5]x i[0.1,10], seed=" << config.seed << ", sizes";

    for (int size = config.grid_start; size <= config.grid_max; size *= 2) {
        const int avail = std::min<int>(size, static_cast<int>(all_points.size()));
        std::vector<Complex> pts(all_points.begin(), all_points.begin() + avail);
        std::vector<CVector> dirs(all_dirs.begin(), all_dirs.begin() + avail);
        const KernelGram kg = gram_matrix(v, pts, dirs);
        const BandCounts bands = band_counts(kg.gram, config.tol);
        run.history.push_back(GridStep{avail, bands.negative, bands.rank, bands.ambiguous_neg,
                                       bands.ambiguous_rank});
        desc << " " << avail;
        const auto& h = run.history;
        const std::size_t m = h.size();
        if (m >= 3) {
            const bool last3_neg = h[m - 1].negative == h[m - 2].negative &&
                                   h[m - 2].negative == h[m - 3].negative;
            const bool last3_rank =
                h[m - 1].rank == h[m - 2].rank && h[m - 2].rank == h[m - 3].rank;
            const bool clean_neg = h[m - 1].ambiguous_negative == 0 &&
                                   h[m - 2].ambiguous_negative == 0 &&
                                   h[m - 3].ambiguous_negative == 0;
            const bool clean_rank = h[m - 1].ambiguous_rank == 0 &&
                                    h[m - 2].ambiguous_rank == 0 &&
                                    h[m - 3].ambiguous_rank == 0;
            if (last3_neg && clean_neg && !run.kappa_stable) {
                run.kappa_stable = true;
                run.kappa = h[m - 1].negative;
            }
            if (last3_rank && clean_rank && !run.rank_stable) {
                run.rank_stable = true;
                run.rank = h[m - 1].rank;
            }
            if (need == Need::Kappa && run.kappa_stable) break;
            if (need == Need::Rank && run.rank_stable) break;
        }
        if (avail < size) break;  // point stream exhausted (heavy pole filtering)
    }
    if (!run.history.empty()) {
        if (!run.kappa_stable) run.kappa = run.history.back().negative;
        if (!run.rank_stable) run.rank = run.history.back().rank;
    }
    run.description = desc.str();
    return run;
}

} // namespace

KappaEstimate negative_squares(const MatrixFunction& v, const KernelConfig& config) {
    const StabilizationRun run = run_grids(v, config, Need::Kappa);
    KappaEstimate out;
    out.kappa = run.kappa;
    out.stabilized = run.kappa_stable;
    out.history = run.history;
    out.grids_used = run.description;
    return out;
}

RankEstimate kernel_rank(const MatrixFunction& v, const KernelConfig& config) {
    const StabilizationRun run = run_grids(v, config, Need::Rank);
    RankEstimate out;
    out.rank = run.rank;
    out.stabilized = run.rank_stable;
    out.history = run.history;
    return out;
}

bool strictness_check(const MatrixFunction& v, const std::vector<Complex>& points) {
    const int m = v.dim();
    if (static_cast<int>(points.size()) < std::max(2, m))
        throw domain_error("strictness_check: need at least dim E sample points");
    for (const auto& z : points) {
        CMatrix stack(m * static_cast<int>(points.size()), m);
        int row = 0;
        for (const auto& zeta : points) {
            stack.block(row, 0, m, m) = kernel_value(v, zeta, z);
            row += m;
        }
        Eigen::JacobiSVD<CMatrix> svd(stack);
        const double smax = svd.singularValues()(0);
        const double smin = svd.singularValues()(svd.singularValues().size() - 1);
        if (smin <= 1e-10 * std::max(smax, 1e-30)) return false;
    }
    return true;
}

std::vector<Complex> default_strictness_points(const MatrixFunction& v) {
    std::vector<Complex> pts = sample_points(v, 2 * v.dim() + 6, 0x5742);
    if (static_cast<int>(pts.size()) < std::max(2, v.dim()))
        throw domain_error("strictness_check: could not sample enough off-pole points");
    return pts;
}

} // namespace nkappa
