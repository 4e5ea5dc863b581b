#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mildrep/potentials.hpp"
#include "mildrep/roots.hpp"

namespace mildrep {

/// Dimension regime for the upper-bound curve: it depends on n only through
/// min(n, 2).
enum class Regime { One, AtLeastTwo };

Regime regime_for(int n);

/// 3 when n == 1, otherwise 4.
int four_star(int n);
int four_star(Regime regime);

/// (4* - 2) / log(4*/2): 1/log(3/2) for n = 1, 2/log 2 otherwise.
double beta_star_inf(Regime regime);

/**
 * Unimodal family whose level sets give the explicit lower bound:
 *   n = 1:  (1/2 - 2^-t) / t
 *   n >= 2: (n - (2n/(n+1))^{t/2} - n ((n-1)/(n+1))^{t/2}) / t
 * For n >= 2 it vanishes at t = 2 and t = 4.
 */
double f_n(int n, double t);

/// Large-n limit 1 - e^{t/beta*}/t (so 1 - 2^{t/2}/t for n >= 2). Only level
/// sets of this function are used, so the additive constant is immaterial.
double f_inf(double t, Regime regime);

/// Maximizer of f_n on (0, inf), found by golden section on [2, 4].
double lower_crossing_beta(int n);

/**
 * Explicit lower bound: the largest alpha >= 2 with f_n(alpha) = f_n(beta).
 * Equals beta once beta is past the maximizer of f_n; otherwise the root on
 * the decreasing branch, resolved to tol by bisection. Requires beta >= 2.
 */
double underline_alpha(int n, double beta, double tol = 1e-12);

/// Dimension-free upper bound: the largest alpha with
/// e^{alpha/beta*}/alpha = e^{beta/beta*}/beta; equals beta when
/// beta >= beta*. Requires beta >= 2.
double alpha_star(Regime regime, double beta, double tol = 1e-12);

/// (W * nu)(x) for nu the centered uniform measure on a unit n-simplex.
double el_potential(int n, const Kernel& kernel, const Eigen::VectorXd& x);

struct MarginOptions {
    int starts = 64;
    std::uint64_t seed = 0;
    int max_iterations = 2000;
    double grad_tol = 1e-10;
};

struct ElMargin {
    /// min (W*nu) over the search ball minus its value at a vertex; <= 0.
    double margin;
    /// Where the minimum was found.
    Eigen::VectorXd argmin;
    /// Local descents that reached a stationary point.
    int converged_starts;
};

/**
 * Numerical Euler-Lagrange check for the unit simplex under the power-law
 * kernel (alpha, beta). Minimizes W*nu over the centered ball of radius
 * max(z_{alpha,beta}, e^{1/beta}) + 0.5 by projected gradient descent from
 * `starts` Halton points (offset by seed), the origin, the antipode of a
 * vertex and all edge midpoints. A negative margin certifies that the
 * simplex violates the Euler-Lagrange condition.
 * Requires alpha > beta >= 2; throws ConvergenceError if no descent
 * converges.
 */
ElMargin el_margin(int n, double alpha, double beta, const MarginOptions& options = {});

struct AlphaPlusOptions {
    double alpha_tol = 1e-3;  ///< final bracket width
    double el_tol = 1e-7;     ///< margin >= -el_tol counts as satisfied
    double root_tol = 1e-12;  ///< tolerance of the enclosing bound solves
    MarginOptions margin;
};

/**
 * Bracket for the Euler-Lagrange threshold: the smallest alpha above which
 * the simplex satisfies the Euler-Lagrange condition. Bisects the sign of
 * el_margin inside [underline_alpha, alpha_star] (widened by root_tol).
 */
Bracket alpha_plus(int n, double beta, const AlphaPlusOptions& options = {});

struct ThresholdReport {
    int n;
    double beta;
    double underline_alpha;
    Bracket alpha_plus;
    double alpha_star;
    Bracket underline_bracket;
    Bracket alpha_star_bracket;
};

/**
 * One report per grid value, in grid order. Grid values are processed in
 * parallel. Throws InvariantViolation if a computed report breaks
 * underline <= alpha_plus <= alpha_star (up to the tolerances).
 */
std::vector<ThresholdReport> phase_sweep(int n, std::span<const double> betas, const AlphaPlusOptions& options = {});

}  // namespace mildrep
