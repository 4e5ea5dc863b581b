#include "mildrep/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "mildrep/energy.hpp"
#include "mildrep/errors.hpp"
#include "mildrep/parallel.hpp"

namespace mildrep {

namespace {

// Row-parallel pair evaluation pays off only for large particle counts.
constexpr Eigen::Index kParallelThreshold = 256;

// Largest step relative to the initial one.
constexpr double kMaxStepRatio = 1e12;

constexpr double kMinStep = 1e-300;

constexpr double kSimplexRelativeTolerance = 1e-6;

// Pairs farther apart than this whose distance moves by less than
// kSmallMove have their value change integrated from w' instead of
// differenced, which avoids cancellation where w' vanishes.
constexpr double kIntegrateMinRadius = 0.1;
constexpr double kSmallMove = 1e-3;

/// Pair distances, values w(r) and factors w'(r)/r, plus the velocity
/// v_i = grad (W * mu)(x_i) at one configuration. The energy gradient with
/// respect to x_i is m_i v_i.
struct PairState {
    Eigen::MatrixXd dist;
    Eigen::MatrixXd values;
    Eigen::MatrixXd force;
    Eigen::MatrixXd velocity;
};

PairState evaluate(const Eigen::MatrixXd& x, const Eigen::VectorXd& weights, const Kernel& kernel)
{
    const Eigen::Index size = x.cols();
    PairState s{Eigen::MatrixXd::Zero(size, size), Eigen::MatrixXd::Zero(size, size),
                Eigen::MatrixXd::Zero(size, size), Eigen::MatrixXd::Zero(x.rows(), size)};
    if (size >= kParallelThreshold) {
        parallel_for(static_cast<std::size_t>(size), [&](std::size_t row) {
            const auto i = static_cast<Eigen::Index>(row);
            for (Eigen::Index j = 0; j < size; ++j) {
                if (j == i)
                    continue;
                const Eigen::VectorXd delta = x.col(i) - x.col(j);
                const double r = delta.norm();
                const RadialSample w = kernel.sample(r);
                s.dist(i, j) = r;
                s.values(i, j) = w.value;
                s.force(i, j) = w.force_factor;
                s.velocity.col(i) += (weights(j) * w.force_factor) * delta;
            }
        });
        return s;
    }
    for (Eigen::Index i = 0; i < size; ++i) {
        for (Eigen::Index j = i + 1; j < size; ++j) {
            const Eigen::VectorXd delta = x.col(i) - x.col(j);
            const double r = delta.norm();
            const RadialSample w = kernel.sample(r);
            s.dist(i, j) = s.dist(j, i) = r;
            s.values(i, j) = s.values(j, i) = w.value;
            s.force(i, j) = s.force(j, i) = w.force_factor;
            const Eigen::VectorXd pull = w.force_factor * delta;
            s.velocity.col(i) += weights(j) * pull;
            s.velocity.col(j) -= weights(i) * pull;
        }
    }
    return s;
}

double pair_energy(const Eigen::MatrixXd& values, const Eigen::VectorXd& weights)
{
    double total = 0.0;
    for (Eigen::Index i = 0; i < values.rows(); ++i)
        for (Eigen::Index j = i + 1; j < values.cols(); ++j)
            total += weights(i) * weights(j) * values(i, j);
    return total;
}

/// E(after) - E(before) summed pair by pair, so the rounding error scales
/// with the individual pair changes rather than with the total energy.
double energy_change(const PairState& before, const PairState& after, const Eigen::MatrixXd& x_before,
                     const Eigen::MatrixXd& x_after, const Eigen::VectorXd& weights, const Kernel& kernel)
{
    const Eigen::MatrixXd shift = x_after - x_before;
    double total = 0.0;
    for (Eigen::Index i = 0; i < x_before.cols(); ++i) {
        for (Eigen::Index j = i + 1; j < x_before.cols(); ++j) {
            const double r0 = before.dist(i, j);
            const double r1 = after.dist(i, j);
            double change;
            if (std::min(r0, r1) >= kIntegrateMinRadius && std::abs(r1 - r0) <= kSmallMove) {
                // r1 - r0 = (r1^2 - r0^2) / (r1 + r0) with r1^2 - r0^2 = (d1 - d0).(d1 + d0)
                const Eigen::VectorXd d0 = x_before.col(i) - x_before.col(j);
                const Eigen::VectorXd d1 = x_after.col(i) - x_after.col(j);
                const double dr = (shift.col(i) - shift.col(j)).dot(d0 + d1) / (r0 + r1);
                const double rm = 0.5 * (r0 + r1);
                const double slope0 = before.force(i, j) * r0;
                const double slope1 = after.force(i, j) * r1;
                const double slope_mid = kernel.sample(rm).force_factor * rm;
                change = dr / 6.0 * (slope0 + 4.0 * slope_mid + slope1);
            } else {
                change = after.values(i, j) - before.values(i, j);
            }
            total += weights(i) * weights(j) * change;
        }
    }
    return total;
}

double max_column_norm(const Eigen::MatrixXd& grad)
{
    return grad.cols() == 0 ? 0.0 : grad.colwise().norm().maxCoeff();
}

void validate(const FlowConfig& config)
{
    const StepRule& s = config.step;
    if (!(config.grad_tol > 0.0))
        throw DomainError("grad_tol must be positive");
    if (config.max_steps < 0)
        throw DomainError("max_steps must be nonnegative");
    if (!(s.initial_step > 0.0) || !(s.shrink > 0.0 && s.shrink < 1.0) ||
        !(s.sufficient_decrease > 0.0 && s.sufficient_decrease < 1.0) || !(s.growth >= 1.0))
        throw DomainError("invalid step rule");
    if (config.init_radius && !(*config.init_radius > 0.0))
        throw DomainError("init_radius must be positive");
    if (!(config.classify_tol > 0.0))
        throw DomainError("classify_tol must be positive");
}

std::string format_diagnostic(const char* what, int step, double gmax, double h)
{
    std::ostringstream os;
    os.precision(6);
    os << what << " after " << step << " steps; max gradient " << gmax << ", last step " << h;
    return os.str();
}

}  // namespace

std::string to_string(FlowStatus status)
{
    switch (status) {
    case FlowStatus::Converged:
        return "converged";
    case FlowStatus::Stalled:
        return "stalled";
    case FlowStatus::MaxSteps:
        return "max_steps";
    }
    return "unknown";
}

double default_init_radius(const Kernel& kernel)
{
    switch (kernel.kind()) {
    case KernelKind::PowerLaw:
    case KernelKind::Rescaled:
        return std::exp(1.0 / std::min(kernel.alpha(), kernel.beta()));
    case KernelKind::LogLimit:
        return std::exp(1.0 / kernel.alpha());
    case KernelKind::PureAttractive:
        return 1.0;
    }
    return 1.0;
}

FlowResult descend(const FlowConfig& config, const Kernel& kernel, const DiscreteMeasure& init)
{
    validate(config);
    const StepRule& rule = config.step;
    const Eigen::VectorXd& weights = init.weights();
    Eigen::MatrixXd x = init.points();
    const double mean_mass = 1.0 / static_cast<double>(weights.size());

    PairState state = evaluate(x, weights, kernel);
    double current = pair_energy(state.values, weights);
    if (!std::isfinite(current))
        throw DomainError("initial configuration has non-finite energy");

    std::vector<double> trace{current};
    double h = rule.initial_step;
    const double max_step = rule.initial_step * kMaxStepRatio;
    int steps = 0;
    FlowStatus status = FlowStatus::MaxSteps;
    std::string diagnostics;
    double gmax = max_column_norm(state.velocity * weights.asDiagonal());

    while (true) {
        if (gmax <= config.grad_tol) {
            status = FlowStatus::Converged;
            break;
        }
        if (steps >= config.max_steps) {
            status = FlowStatus::MaxSteps;
            diagnostics = format_diagnostic("step budget exhausted", steps, gmax, h);
            break;
        }
        // Velocity scaled by the mean mass: conserves the barycenter for any
        // weights and equals the energy gradient for equal ones.
        const Eigen::MatrixXd direction = mean_mass * state.velocity;
        const double grad_sq = mean_mass * (state.velocity.colwise().squaredNorm() * weights)(0);
        bool accepted = false;
        for (; h >= kMinStep; h *= rule.shrink) {
            Eigen::MatrixXd trial_x = x - h * direction;
            PairState trial = evaluate(trial_x, weights, kernel);
            const double change = energy_change(state, trial, x, trial_x, weights, kernel);
            if (change < 0.0 && change <= -rule.sufficient_decrease * h * grad_sq) {
                x = std::move(trial_x);
                state = std::move(trial);
                current += change;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            status = FlowStatus::Stalled;
            diagnostics = format_diagnostic("line search found no sufficient decrease", steps, gmax, h);
            break;
        }
        trace.push_back(current);
        ++steps;
        gmax = max_column_norm(state.velocity * weights.asDiagonal());
        h = std::min(h * rule.growth, max_step);
    }

    const DiscreteMeasure moved = init.with_points(std::move(x));
    DiscreteMeasure centered = center(moved);
    const double final_energy = energy(centered, kernel);
    const Classification label = classify(centered, config.classify_tol);
    return FlowResult{.final = std::move(centered),
                      .energy = final_energy,
                      .energy_trace = std::move(trace),
                      .steps = steps,
                      .classification = label,
                      .converged = status == FlowStatus::Converged,
                      .status = status,
                      .max_gradient = gmax,
                      .barycenter_drift = (moved.barycenter() - init.barycenter()).norm(),
                      .diagnostics = std::move(diagnostics),
                      .restart_index = -1};
}

DiscreteMeasure random_ball_init(int n, int particles, double radius, std::uint64_t seed, int restart)
{
    if (n < 1 || particles < 1)
        throw DomainError("need n >= 1 and at least one particle");
    if (!(radius > 0.0))
        throw DomainError("init radius must be positive");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit;

    Eigen::MatrixXd points(n, particles);
    for (int i = 0; i < particles; ++i) {
        Eigen::VectorXd dir(n);
        double norm = 0.0;
        while (norm == 0.0) {
            for (int d = 0; d < n; ++d)
                dir(d) = gauss(rng);
            norm = dir.norm();
        }
        points.col(i) = (radius * std::pow(unit(rng), 1.0 / n) / norm) * dir;
    }
    return DiscreteMeasure::uniform(std::move(points));
}

MultistartResult multistart(const FlowConfig& config, const Kernel& kernel)
{
    validate(config);
    if (config.n < 1)
        throw DomainError("dimension must be >= 1");
    if (config.particles < config.n + 1)
        throw DomainError("need at least n + 1 particles");
    if (config.restarts < 1)
        throw DomainError("need at least one restart");
    const double radius = config.init_radius.value_or(default_init_radius(kernel));

    const auto count = static_cast<std::size_t>(config.restarts);
    std::vector<std::optional<FlowResult>> results(count);
    std::vector<RestartSummary> summaries(count);
    parallel_for(count, [&](std::size_t k) {
        const int index = static_cast<int>(k);
        RestartSummary& summary = summaries[k];
        summary = {index, false, std::numeric_limits<double>::quiet_NaN(), FlowStatus::Stalled, 0, {}};
        try {
            const DiscreteMeasure init = random_ball_init(config.n, config.particles, radius, config.seed, index);
            FlowResult r = descend(config, kernel, init);
            r.restart_index = index;
            summary.energy = r.energy;
            summary.status = r.status;
            summary.steps = r.steps;
            if (!std::isfinite(r.energy)) {
                summary.error = "non-finite energy";
                return;
            }
            summary.ok = true;
            results[k] = std::move(r);
        } catch (const std::exception& e) {
            summary.error = e.what();
        }
    });

    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < count; ++k)
        if (results[k] && (!best || results[k]->energy < results[*best]->energy))
            best = k;
    if (!best) {
        std::string message = "all " + std::to_string(count) + " restarts failed";
        if (!summaries.empty() && !summaries.front().error.empty())
            message += "; first error: " + summaries.front().error;
        throw ConvergenceError(message);
    }
    return {std::move(*results[*best]), std::move(summaries)};
}

SimplexProbe simplex_optimality_probe(int n, double alpha, double beta, const FlowConfig& config)
{
    if (!(beta >= 2.0) || !(alpha > beta))
        throw DomainError("simplex_optimality_probe requires alpha > beta >= 2");
    FlowConfig c = config;
    c.n = n;
    return simplex_optimality_probe(Kernel::power_law(alpha, beta), c);
}

SimplexProbe simplex_optimality_probe(const Kernel& kernel, const FlowConfig& config)
{
    const MultistartResult run = multistart(config, kernel);
    const double reference = simplex_energy(config.n, 1.0, kernel);
    const double gap = reference - run.best.energy;
    return {gap <= kSimplexRelativeTolerance * std::abs(reference), gap, run.best.energy, reference};
}

}  // namespace mildrep
