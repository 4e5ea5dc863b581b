#pragma once

// Independent reference implementations and random generators shared by the
// test programs. Nothing here calls into the library's numerics.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mildrep/measures.hpp"

namespace oracle {

inline double powerlaw(double a, double b, double r)
{
    return std::pow(r, a) / a - std::pow(r, b) / b;
}

inline double powerlaw_prime(double a, double b, double r)
{
    return std::pow(r, a - 1) - std::pow(r, b - 1);
}

inline double rescaled(double a, double b, double r)
{
    return (b * std::pow(r, a) - a * std::pow(r, b)) / (a - b);
}

inline double rescaled_prime(double a, double b, double r)
{
    return a * b * (std::pow(r, a - 1) - std::pow(r, b - 1)) / (a - b);
}

inline double loglimit(double a, double r)
{
    return r == 0.0 ? 0.0 : std::pow(r, a) * (a * std::log(r) - 1.0);
}

inline double loglimit_prime(double a, double r)
{
    return a * a * std::pow(r, a - 1) * std::log(r);
}

/// 1/2 sum_{i,j} w_i w_j k(|x_i - x_j|) over all ordered pairs.
template <class K>
double energy(const mildrep::DiscreteMeasure& mu, K&& k)
{
    double total = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i)
        for (Eigen::Index j = 0; j < mu.size(); ++j) {
            double d2 = 0.0;
            for (int c = 0; c < mu.dim(); ++c) {
                const double dc = mu.points()(c, i) - mu.points()(c, j);
                d2 += dc * dc;
            }
            total += mu.weight(i) * mu.weight(j) * k(std::sqrt(d2));
        }
    return 0.5 * total;
}

inline Eigen::MatrixXd second_moment(const mildrep::DiscreteMeasure& mu)
{
    const int n = mu.dim();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (Eigen::Index i = 0; i < mu.size(); ++i)
                out(a, b) += mu.weight(i) * mu.points()(a, i) * mu.points()(b, i);
    return out;
}

/// Signed double sum of |x - y|^4 against (mu0 - mu1) x (mu0 - mu1), which
/// equals 8 E_{W_4}(mu0 - mu1).
inline double signed_quartic(const mildrep::DiscreteMeasure& mu0, const mildrep::DiscreteMeasure& mu1)
{
    std::vector<Eigen::VectorXd> pts;
    std::vector<double> mass;
    for (Eigen::Index i = 0; i < mu0.size(); ++i) {
        pts.push_back(mu0.point(i));
        mass.push_back(mu0.weight(i));
    }
    for (Eigen::Index i = 0; i < mu1.size(); ++i) {
        pts.push_back(mu1.point(i));
        mass.push_back(-mu1.weight(i));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const double d2 = (pts[i] - pts[j]).squaredNorm();
            total += mass[i] * mass[j] * d2 * d2;
        }
    return total;
}

/// Numerator of f_n: f_n(t) = N(t)/t.
inline double fn_numerator(int n, double t)
{
    if (n == 1)
        return 0.5 - std::pow(2.0, -t);
    const double a = 2.0 * n / (n + 1.0);
    const double b = (n - 1.0) / (n + 1.0);
    return n - std::pow(a, t / 2) - n * std::pow(b, t / 2);
}

inline double fn(int n, double t)
{
    return fn_numerator(n, t) / t;
}

/// t N'(t) - N(t): same sign as f_n'(t). For n = 1 this is
/// (t log 2 + 1) 2^-t - 1/2.
inline double fn_slope_sign(int n, double t)
{
    if (n == 1)
        return (t * std::log(2.0) + 1.0) * std::pow(2.0, -t) - 0.5;
    const double a = 2.0 * n / (n + 1.0);
    const double b = (n - 1.0) / (n + 1.0);
    const double dn = -0.5 * std::log(a) * std::pow(a, t / 2) - n * 0.5 * std::log(b) * std::pow(b, t / 2);
    return t * dn - fn_numerator(n, t);
}

/// Plain bisection on a sign change, independent of the library's roots.
template <class F>
double bisect(F&& f, double lo, double hi, int iterations = 200)
{
    const bool lo_negative = f(lo) < 0;
    for (int k = 0; k < iterations; ++k) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) < 0) == lo_negative)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// First grid point right of start where g changes sign, resolution step.
template <class G>
double grid_crossing(G&& g, double start, double stop, double step)
{
    const bool initial = g(start) < 0;
    for (double t = start; t <= stop; t += step)
        if ((g(t) < 0) != initial)
            return t;
    return stop;
}

}  // namespace oracle

namespace gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int integer(Rng& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random weights (strictly positive, normalized) on random points in a cube.
inline mildrep::DiscreteMeasure measure(Rng& rng, int n, int size, double half_width = 1.0)
{
    Eigen::MatrixXd pts(n, size);
    for (int i = 0; i < size; ++i)
        for (int d = 0; d < n; ++d)
            pts(d, i) = uniform(rng, -half_width, half_width);
    Eigen::VectorXd w(size);
    for (int i = 0; i < size; ++i)
        w(i) = uniform(rng, 0.1, 1.0);
    w /= w.sum();
    w(size - 1) = 1.0 - (w.sum() - w(size - 1));
    return mildrep::DiscreteMeasure(pts, w);
}

inline Eigen::MatrixXd rotation(Rng& rng, int n)
{
    Eigen::MatrixXd g(n, n);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    if (q.determinant() < 0)
        q.col(0) *= -1.0;
    return q;
}

}  // namespace gen
