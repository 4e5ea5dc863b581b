#pragma once

#include <cmath>
#include <string>

#include "mildrep/errors.hpp"

namespace mildrep {

/// Closed interval known to contain a quantity of interest.
struct Bracket {
    double lo;
    double hi;

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

/**
 * Golden-section search for the maximizer of a unimodal f on [lo, hi].
 *
 * Shrinks the interval until its width is at most tol and returns the
 * midpoint. Throws BracketError when an endpoint value exceeds the value at
 * the returned point, i.e. the maximum is not interior.
 *
 * The location is only resolved to about sqrt(machine epsilon) relative to
 * the curvature scale, since f is flat at its maximum.
 */
template <class F>
double argmax_unimodal(F&& f, double lo, double hi, double tol)
{
    if (!(lo < hi) || !(tol > 0.0))
        throw BracketError("argmax_unimodal: need lo < hi and tol > 0");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    const double fx = f(x);
    if (f(lo) > fx || f(hi) > fx)
        throw BracketError("argmax_unimodal: maximum is not interior to [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    return x;
}

/**
 * Bisection for a sign change of a continuous f on [lo, hi].
 * Returns a bracket of width <= tol around the root. Throws BracketError if
 * f(lo) and f(hi) are nonzero with the same sign.
 */
template <class F>
Bracket bisect_root(F&& f, double lo, double hi, double tol)
{
    if (!(lo <= hi) || !(tol > 0.0))
        throw BracketError("bisect_root: need lo <= hi and tol > 0");
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0)
        return {lo, lo};
    if (fhi == 0.0)
        return {hi, hi};
    if (std::signbit(flo) == std::signbit(fhi))
        throw BracketError("bisect_root: interval does not bracket a sign change");

    // Cap on halvings; 200 is far beyond what double precision can resolve.
    for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double fmid = f(mid);
        if (fmid == 0.0)
            return {mid, mid};
        if (std::signbit(fmid) == std::signbit(flo)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

/**
 * Bisection on a monotone predicate: pred(lo) is assumed false and pred(hi)
 * true; returns a bracket of width <= tol around the switch point.
 */
template <class Pred>
Bracket bisect_predicate(Pred&& pred, double lo, double hi, double tol)
{
    if (!(tol > 0.0))
        throw BracketError("bisect_predicate: tol must be positive");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return {lo, hi};
}

}  // namespace mildrep
