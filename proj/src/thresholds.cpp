#include "mildrep/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mildrep/energy.hpp"
#include "mildrep/errors.hpp"
#include "mildrep/measures.hpp"
#include "mildrep/parallel.hpp"

namespace mildrep {

namespace {

// Beyond this the doubling search for an upper root bracket gives up.
constexpr double kBracketCeiling = 1e6;

// f_n(beta) this close to the maximum value means beta sits on the fold.
constexpr double kFoldTolerance = 1e-14;

void require_beta(double beta)
{
    if (!std::isfinite(beta) || beta < 2.0)
        throw DomainError("threshold curves are defined for beta >= 2");
}

void require_dimension(int n)
{
    if (n < 1)
        throw DomainError("dimension must be >= 1");
}

// Root of g right of left; g(left) < 0 and g must turn positive before the
// doubling search passes kBracketCeiling.
template <class G>
double right_branch_root(G&& g, double left, double start, double tol)
{
    double hi = std::max(start, left);
    while (g(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > kBracketCeiling)
            throw BracketError("no sign change found right of " + std::to_string(left));
    }
    return bisect_root(g, left, hi, tol).mid();
}

double radical_inverse(std::uint64_t index, unsigned base)
{
    double inv = 1.0 / base;
    double scale = inv;
    double out = 0.0;
    while (index > 0) {
        out += static_cast<double>(index % base) * scale;
        index /= base;
        scale *= inv;
    }
    return out;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

// Deterministic low-discrepancy points inside the centered ball of radius R.
std::vector<Eigen::VectorXd> halton_ball(int n, int count, double radius, std::uint64_t seed)
{
    if (n > static_cast<int>(std::size(kPrimes)))
        throw DomainError("Halton starts are limited to dimension 16");
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t k = 1 + seed * 1024; static_cast<int>(out.size()) < count; ++k) {
        Eigen::VectorXd x(n);
        for (int d = 0; d < n; ++d)
            x(d) = radius * (2.0 * radical_inverse(k, kPrimes[d]) - 1.0);
        if (x.norm() <= radius)
            out.push_back(std::move(x));
    }
    return out;
}

struct LocalMinimum {
    double value;
    Eigen::VectorXd x;
    bool converged;
};

// Projected gradient descent with Armijo backtracking on the ball |x| <= R.
LocalMinimum descend_in_ball(const DiscreteMeasure& nu, const Kernel& kernel, Eigen::VectorXd x, double radius,
                             const MarginOptions& options)
{
    auto project = [radius](Eigen::VectorXd v) {
        const double norm = v.norm();
        if (norm > radius)
            v *= radius / norm;
        return v;
    };
    x = project(std::move(x));
    double f = convolve(nu, kernel, x);
    Eigen::VectorXd g = convolve_gradient(nu, kernel, x);
    double step = 1.0;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if ((project(x - g) - x).norm() <= options.grad_tol)
            return {f, x, true};
        bool accepted = false;
        while (step > 1e-16) {
            Eigen::VectorXd trial = project(x - step * g);
            const double moved = g.dot(x - trial);
            if (moved <= 0.0)
                return {f, x, true};
            const double ft = convolve(nu, kernel, trial);
            if (ft < f && ft <= f - 1e-4 * moved) {
                x = std::move(trial);
                f = ft;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            return {f, x, true};  // no representable decrease left
        g = convolve_gradient(nu, kernel, x);
        step *= 2.0;
    }
    return {f, x, false};
}

}  // namespace

Regime regime_for(int n)
{
    require_dimension(n);
    return n == 1 ? Regime::One : Regime::AtLeastTwo;
}

int four_star(int n)
{
    return four_star(regime_for(n));
}

int four_star(Regime regime)
{
    return regime == Regime::One ? 3 : 4;
}

double beta_star_inf(Regime regime)
{
    const double fs = four_star(regime);
    return (fs - 2.0) / std::log(fs / 2.0);
}

double f_n(int n, double t)
{
    require_dimension(n);
    if (!(t > 0.0))
        throw DomainError("f_n is defined for t > 0");
    if (n == 1)
        return (0.5 - std::exp2(-t)) / t;
    const double m = n;
    const double half_t = 0.5 * t;
    // n - n ((n-1)/(n+1))^{t/2}, kept accurate for large n
    const double near_one = -m * std::expm1(half_t * std::log1p(-2.0 / (m + 1.0)));
    const double far = std::exp(half_t * std::log(2.0 * m / (m + 1.0)));
    return (near_one - far) / t;
}

double f_inf(double t, Regime regime)
{
    if (!(t > 0.0))
        throw DomainError("f_inf is defined for t > 0");
    return 1.0 - std::exp(t / beta_star_inf(regime)) / t;
}

double lower_crossing_beta(int n)
{
    require_dimension(n);
    return argmax_unimodal([n](double t) { return f_n(n, t); }, 2.0, 4.0, 1e-10);
}

double underline_alpha(int n, double beta, double tol)
{
    require_dimension(n);
    require_beta(beta);
    const double peak = lower_crossing_beta(n);
    if (beta >= peak)
        return beta;
    const double target = f_n(n, beta);
    if (std::abs(target - f_n(n, peak)) < kFoldTolerance)
        return peak;
    auto g = [n, target](double a) { return target - f_n(n, a); };
    return right_branch_root(g, peak, four_star(n), tol);
}

double alpha_star(Regime regime, double beta, double tol)
{
    require_beta(beta);
    const double bs = beta_star_inf(regime);
    if (beta >= bs)
        return beta;
    // Log form of e^{a/bs}/a = e^{beta/bs}/beta; the left side is convex in
    // log scale with its minimum at a = bs.
    const double target = beta / bs - std::log(beta);
    auto g = [bs, target](double a) { return a / bs - std::log(a) - target; };
    return right_branch_root(g, bs, four_star(regime), tol);
}

double el_potential(int n, const Kernel& kernel, const Eigen::VectorXd& x)
{
    const DiscreteMeasure nu = unit_simplex(n);
    if (x.size() != n)
        throw DomainError("evaluation point has the wrong dimension");
    return convolve(nu, kernel, x);
}

ElMargin el_margin(int n, double alpha, double beta, const MarginOptions& options)
{
    require_dimension(n);
    require_beta(beta);
    if (!(alpha > beta) || !std::isfinite(alpha))
        throw DomainError("el_margin requires alpha > beta");
    if (options.starts < 0)
        throw DomainError("number of starts must be nonnegative");

    const Kernel kernel = Kernel::power_law(alpha, beta);
    const DiscreteMeasure nu = unit_simplex(n);
    const Eigen::VectorXd vertex = nu.point(0);
    const double reference = convolve(nu, kernel, vertex);
    const double radius = std::max(zero_radius(alpha, beta), std::exp(1.0 / beta)) + 0.5;

    std::vector<Eigen::VectorXd> starts;
    starts.push_back(vertex);
    starts.push_back(Eigen::VectorXd::Zero(n));
    starts.push_back(-vertex);
    for (Eigen::Index i = 0; i < nu.size(); ++i)
        for (Eigen::Index j = i + 1; j < nu.size(); ++j)
            starts.push_back(0.5 * (nu.point(i) + nu.point(j)));
    for (auto& x : halton_ball(n, options.starts, radius, options.seed))
        starts.push_back(std::move(x));

    ElMargin out{std::numeric_limits<double>::infinity(), vertex, 0};
    double worst_gradient = 0.0;
    for (const auto& start : starts) {
        const LocalMinimum local = descend_in_ball(nu, kernel, start, radius, options);
        if (local.converged)
            ++out.converged_starts;
        else
            worst_gradient = std::max(worst_gradient, convolve_gradient(nu, kernel, local.x).norm());
        if (local.value < out.margin) {
            out.margin = local.value;
            out.argmin = local.x;
        }
    }
    if (out.converged_starts == 0)
        throw ConvergenceError("el_margin: no local descent converged for (n, alpha, beta) = (" + std::to_string(n) +
                               ", " + std::to_string(alpha) + ", " + std::to_string(beta) +
                               "); largest remaining gradient " + std::to_string(worst_gradient));
    out.margin -= reference;
    return out;
}

Bracket alpha_plus(int n, double beta, const AlphaPlusOptions& options)
{
    const double lower = underline_alpha(n, beta, options.root_tol);
    const double upper = alpha_star(regime_for(n), beta, options.root_tol);
    const double lo = std::max(lower - options.root_tol, beta);
    const double hi = upper + options.root_tol;
    if (lo > hi)
        throw InvariantViolation("lower bound " + std::to_string(lower) + " exceeds upper bound " +
                                 std::to_string(upper) + " at beta = " + std::to_string(beta));
    auto satisfied = [&](double alpha) {
        return el_margin(n, alpha, beta, options.margin).margin >= -options.el_tol;
    };
    return bisect_predicate(satisfied, lo, hi, options.alpha_tol);
}

std::vector<ThresholdReport> phase_sweep(int n, std::span<const double> betas, const AlphaPlusOptions& options)
{
    require_dimension(n);
    for (double beta : betas)
        require_beta(beta);

    std::vector<ThresholdReport> reports(betas.size());
    parallel_for(betas.size(), [&](std::size_t k) {
        const double beta = betas[k];
        const double rt = options.root_tol;
        ThresholdReport r;
        r.n = n;
        r.beta = beta;
        r.underline_alpha = underline_alpha(n, beta, rt);
        r.alpha_star = alpha_star(regime_for(n), beta, rt);
        r.alpha_plus = alpha_plus(n, beta, options);
        r.underline_bracket = {r.underline_alpha - rt, r.underline_alpha + rt};
        r.alpha_star_bracket = {r.alpha_star - rt, r.alpha_star + rt};
        reports[k] = r;
    });

    for (const auto& r : reports) {
        const double slack = options.alpha_tol;
        const bool ordered = r.underline_alpha >= r.beta - options.root_tol &&
                             r.alpha_star >= r.beta - options.root_tol && r.alpha_plus.lo <= r.alpha_plus.hi &&
                             r.underline_alpha <= r.alpha_plus.hi + slack && r.alpha_plus.lo <= r.alpha_star + slack;
        if (!ordered)
            throw InvariantViolation("threshold ordering violated at n = " + std::to_string(r.n) +
                                     ", beta = " + std::to_string(r.beta));
    }
    return reports;
}

}  // namespace mildrep
