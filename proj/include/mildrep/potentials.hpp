#pragma once

#include <string>

namespace mildrep {

/// Attractive/repulsive exponent pair of a two-exponent kernel.
struct Exponents {
    double alpha;
    double beta;
};

enum class KernelKind {
    PowerLaw,        ///< r^a/a - r^b/b
    Rescaled,        ///< (b r^a - a r^b)/(a - b), minimum -1 at r = 1
    LogLimit,        ///< r^a (a log r - 1), the b -> a limit of Rescaled
    PureAttractive,  ///< r^a/a
};

/// Value of a radial profile together with w'(r)/r, the factor that turns
/// w' into a force along x - y.
struct RadialSample {
    double value;
    double force_factor;
};

/**
 * Radial pair potential W(x) = w(|x|).
 *
 * Kernels are immutable values built through the named constructors, which
 * validate the exponents. PowerLaw requires alpha > beta > 0. Rescaled is
 * symmetric in its exponents and accepts either order as long as they differ
 * and are positive. LogLimit requires alpha != 0, PureAttractive alpha > 0.
 *
 * Powers are evaluated as exp(p log r), with r = 0 handled by its limit.
 */
class Kernel {
public:
    static Kernel power_law(double alpha, double beta);
    static Kernel rescaled(double alpha, double beta);
    static Kernel log_limit(double alpha);
    static Kernel pure_attractive(double alpha);

    KernelKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    /// Repulsive exponent; NaN for the single-exponent kinds.
    double beta() const { return beta_; }
    bool has_beta() const { return kind_ == KernelKind::PowerLaw || kind_ == KernelKind::Rescaled; }

    /// w(r) for r >= 0.
    double value(double r) const;

    /// w'(r). Defined at r = 0 through its limit when that limit is finite;
    /// throws DomainError when the formula is singular there.
    double derivative(double r) const;

    /// w(r) and w'(r)/r in one pass; force_factor is 0 at r = 0, which is the
    /// convention for coincident particles.
    RadialSample sample(double r) const;

    /// Short human-readable tag such as "powerlaw(4,2)".
    std::string describe() const;

private:
    Kernel(KernelKind kind, double alpha, double beta) : kind_(kind), alpha_(alpha), beta_(beta) {}

    KernelKind kind_;
    double alpha_;
    double beta_;
};

/// r^p for r >= 0 via exp(p log r); 0^p is 0 for p > 0, 1 for p = 0 and
/// +inf for p < 0.
double pow_nonneg(double r, double p);

/// Positive zero of the two-exponent profile: (alpha/beta)^(1/(alpha-beta)),
/// or e^(1/beta) on the diagonal alpha == beta. Requires alpha >= beta > 0.
double zero_radius(double alpha, double beta);

/// alpha * d/dbeta of the rescaled profile, in closed form
///   alpha^2 r^beta (t - 1 - log t) / (alpha - beta)^2,  t = r^(alpha-beta).
/// Nonnegative, and zero exactly at r = 1. Requires alpha != 0,
/// alpha != beta, r > 0.
double dbeta_rescaled(double alpha, double beta, double r);

}  // namespace mildrep
