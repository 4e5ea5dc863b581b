#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mildrep/measures.hpp"
#include "mildrep/potentials.hpp"

namespace mildrep {

/// Armijo backtracking along the descent direction d: a step h is accepted
/// when E(x - h d) <= E(x) - sufficient_decrease * h <grad E, d>; otherwise
/// h *= shrink.
/// After an accepted step the next trial starts from h * growth.
struct StepRule {
    double initial_step = 1.0;
    double shrink = 0.5;
    double sufficient_decrease = 1e-4;
    double growth = 2.0;
};

struct FlowConfig {
    int n = 2;
    int particles = 40;
    int max_steps = 20000;
    StepRule step;
    double grad_tol = 1e-10;
    std::uint64_t seed = 0;
    int restarts = 20;
    /// Radius of the ball initial positions are drawn from; when unset
    /// default_init_radius(kernel) is used.
    std::optional<double> init_radius;
    double classify_tol = 1e-3;
};

enum class FlowStatus { Converged, Stalled, MaxSteps };

std::string to_string(FlowStatus status);

struct FlowResult {
    DiscreteMeasure final;
    /// energy(final, kernel), recomputed after centering.
    double energy = 0.0;
    /// Energy before the first step and after every accepted step.
    std::vector<double> energy_trace;
    int steps = 0;
    Classification classification;
    bool converged = false;
    FlowStatus status = FlowStatus::MaxSteps;
    /// Largest per-particle gradient norm at the last iterate.
    double max_gradient = 0.0;
    /// Barycenter displacement accumulated during the descent, before the
    /// output is centered.
    double barycenter_drift = 0.0;
    std::string diagnostics;
    /// Restart that produced this result; -1 for a plain descend.
    int restart_index = -1;
};

/// Default initialization radius for a kernel: e^{1/beta} for the two
/// exponent kinds, e^{1/alpha} for LogLimit and 1 for PureAttractive.
double default_init_radius(const Kernel& kernel);

/**
 * Gradient descent on the particle positions of init at fixed weights.
 *
 * Each step moves x_i to x_i - (h/N) grad (W * mu)(x_i) with Armijo
 * backtracking; for equal weights this is x_i - h grad_i E, and for any
 * weights the barycenter is conserved. Energy
 * differences are accumulated pair by pair, so the line search resolves
 * decreases well below the rounding level of the total energy. Stops when the
 * largest per-particle gradient norm |grad_i E| is <= grad_tol (Converged), when no
 * step down to 1e-300 gives sufficient decrease (Stalled) or after
 * max_steps accepted steps (MaxSteps). The output is centered.
 */
FlowResult descend(const FlowConfig& config, const Kernel& kernel, const DiscreteMeasure& init);

struct RestartSummary {
    int index;
    bool ok;
    double energy;
    FlowStatus status;
    int steps;
    std::string error;
};

struct MultistartResult {
    FlowResult best;
    std::vector<RestartSummary> restarts;
};

/// Equal-weight particles drawn uniformly from the centered ball of the
/// given radius, with an RNG seeded by (seed, restart).
DiscreteMeasure random_ball_init(int n, int particles, double radius, std::uint64_t seed, int restart);

/**
 * Runs config.restarts independent descents from random_ball_init and
 * returns the lowest energy (ties broken by restart index). Restarts run in
 * parallel; the result does not depend on the thread count. A restart fails
 * when descend throws or ends with a non-finite energy; ConvergenceError is
 * thrown only if every restart fails.
 */
MultistartResult multistart(const FlowConfig& config, const Kernel& kernel);

struct SimplexProbe {
    bool simplex_optimal;
    /// simplex_energy - best_energy; positive when the simplex is beaten.
    double gap;
    double best_energy;
    double simplex_energy;
};

/// Multistart on the power-law kernel (alpha, beta) compared against the
/// unit simplex energy with tolerance 1e-6 |simplex energy|.
/// Requires alpha > beta >= 2.
SimplexProbe simplex_optimality_probe(int n, double alpha, double beta, const FlowConfig& config);

/// Same comparison for an arbitrary kernel.
SimplexProbe simplex_optimality_probe(const Kernel& kernel, const FlowConfig& config);

}  // namespace mildrep
