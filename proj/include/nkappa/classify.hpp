#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nkappa/kernel.hpp"

namespace nkappa {

struct ClassifyConfig {
    KernelConfig kernel;
    double y_min = 10.0;
    double y_max = 1e6;
    int samples_per_decade = 8;
};

/// Limit of a quantity along the ray z = iy, y -> infinity.
struct RayLimit {
    enum class State { Finite, Infinite, Indeterminate };
    State state = State::Indeterminate;
    Complex value;  // limit when finite, unit direction when infinite
    std::vector<std::pair<double, Complex>> samples;

    bool finite() const { return state == State::Finite; }
    bool is_real_negative(double tol = 1e-6) const;
    bool is_real_nonnegative(double tol = 1e-6) const;
};

enum class InfinityLabel { GenPoleNonpos, GenZeroNonpos, Neither, ImproperGrowth };

struct InfinityType {
    InfinityLabel label = InfinityLabel::Neither;
    RayLimit v_over_z;
    RayLimit z_times_v;
    bool indeterminate = false;
};

enum class Subclass { N0, N1, N01, NotApplicable };

struct DirectionTrace {
    CVector direction;
    std::vector<std::pair<double, double>> weighted_im;  // (y, y*(Im V(iy)f,f))
    bool bounded = false;
    bool flagged_oscillating = false;
};

struct SubspaceB {
    std::vector<CVector> basis;
    std::vector<DirectionTrace> evidence;
    bool exact = false;  // decided from Laurent data rather than the sweep
};

struct ClassificationReport {
    KappaEstimate kappa;
    bool cond_growth = false;
    bool cond_strict = false;
    SubspaceB b;
    bool cond_decay_on_b = false;
    Subclass subclass = Subclass::NotApplicable;
    bool realizable = false;
    std::vector<std::string> notes;
    std::vector<std::pair<double, Complex>> growth_trace;  // (y, (V(iy)f,f)/y) worst direction
};

std::string to_string(Subclass s);
std::string to_string(InfinityLabel l);

/// Generalized pole/zero type of the point at infinity, scalar inputs.
InfinityType infinity_type(const MatrixFunction& v, const ClassifyConfig& config = {});

/// Channel directions along which y*(Im V(iy)f, f) stays bounded.
SubspaceB subspace_B(const MatrixFunction& v, const ClassifyConfig& config = {});

/// Full realizability classification with per-condition evidence.
ClassificationReport classify_full(const MatrixFunction& v, const ClassifyConfig& config = {});

/// Shared ray-limit estimator (geometric y-grid, convergence by trailing
/// agreement, divergence by sustained growth).
RayLimit ray_limit(const std::vector<std::pair<double, Complex>>& samples);

} // namespace nkappa
