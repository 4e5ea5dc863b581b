#include "mildrep/potentials.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "mildrep/errors.hpp"

namespace mildrep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this r*r is subnormal and the cheap force formula loses accuracy.
constexpr double kTinyRadius = 1e-150;

void require_finite(double v, const char* what)
{
    if (!std::isfinite(v))
        throw DomainError(std::string(what) + " must be finite");
}

// Both rescaled orderings evaluate through (hi, lo) so that swapping the
// exponents gives bit-identical results.
std::pair<double, double> ordered(double a, double b)
{
    return a > b ? std::pair{a, b} : std::pair{b, a};
}

double finite_or_throw(double v, const Kernel& k)
{
    if (!std::isfinite(v))
        throw DomainError("derivative of " + k.describe() + " is singular at r = 0");
    return v;
}

}  // namespace

double pow_nonneg(double r, double p)
{
    if (r == 0.0) {
        if (p > 0.0)
            return 0.0;
        return p == 0.0 ? 1.0 : kInf;
    }
    return std::exp(p * std::log(r));
}

Kernel Kernel::power_law(double alpha, double beta)
{
    require_finite(alpha, "alpha");
    require_finite(beta, "beta");
    if (!(alpha > beta && beta > 0.0))
        throw DomainError("power-law kernel requires alpha > beta > 0");
    return Kernel(KernelKind::PowerLaw, alpha, beta);
}

Kernel Kernel::rescaled(double alpha, double beta)
{
    require_finite(alpha, "alpha");
    require_finite(beta, "beta");
    if (!(alpha > 0.0 && beta > 0.0) || alpha == beta)
        throw DomainError("rescaled kernel requires distinct positive exponents");
    return Kernel(KernelKind::Rescaled, alpha, beta);
}

Kernel Kernel::log_limit(double alpha)
{
    require_finite(alpha, "alpha");
    if (alpha == 0.0)
        throw DomainError("log-limit kernel requires alpha != 0");
    return Kernel(KernelKind::LogLimit, alpha, kNaN);
}

Kernel Kernel::pure_attractive(double alpha)
{
    require_finite(alpha, "alpha");
    if (!(alpha > 0.0))
        throw DomainError("pure attractive kernel requires alpha > 0");
    return Kernel(KernelKind::PureAttractive, alpha, kNaN);
}

double Kernel::value(double r) const
{
    if (!(r >= 0.0))
        throw DomainError("radius must be nonnegative");
    if (r == 0.0) {
        // LogLimit with alpha < 0 blows up at the origin.
        return (kind_ == KernelKind::LogLimit && alpha_ < 0.0) ? kInf : 0.0;
    }
    const double u = std::log(r);
    switch (kind_) {
    case KernelKind::PowerLaw:
        return std::exp(alpha_ * u) / alpha_ - std::exp(beta_ * u) / beta_;
    case KernelKind::Rescaled: {
        const auto [hi, lo] = ordered(alpha_, beta_);
        return -1.0 + (lo * std::expm1(hi * u) - hi * std::expm1(lo * u)) / (hi - lo);
    }
    case KernelKind::LogLimit:
        return std::exp(alpha_ * u) * (alpha_ * u - 1.0);
    case KernelKind::PureAttractive:
        return std::exp(alpha_ * u) / alpha_;
    }
    return kNaN;
}

double Kernel::derivative(double r) const
{
    if (!(r >= 0.0))
        throw DomainError("radius must be nonnegative");
    if (r == 0.0) {
        switch (kind_) {
        case KernelKind::PowerLaw:
            return finite_or_throw(pow_nonneg(0.0, alpha_ - 1.0) - pow_nonneg(0.0, beta_ - 1.0), *this);
        case KernelKind::Rescaled: {
            const auto [hi, lo] = ordered(alpha_, beta_);
            const double diff = pow_nonneg(0.0, hi - 1.0) - pow_nonneg(0.0, lo - 1.0);
            return finite_or_throw(hi * lo * diff / (hi - lo), *this);
        }
        case KernelKind::LogLimit:
            // alpha^2 r^(alpha-1) log r -> 0 only when alpha > 1
            return finite_or_throw(alpha_ > 1.0 ? 0.0 : kInf, *this);
        case KernelKind::PureAttractive:
            return finite_or_throw(pow_nonneg(0.0, alpha_ - 1.0), *this);
        }
    }
    const double u = std::log(r);
    switch (kind_) {
    case KernelKind::PowerLaw:
        return std::exp((alpha_ - 1.0) * u) - std::exp((beta_ - 1.0) * u);
    case KernelKind::Rescaled: {
        const auto [hi, lo] = ordered(alpha_, beta_);
        return hi * lo * std::exp((lo - 1.0) * u) * std::expm1((hi - lo) * u) / (hi - lo);
    }
    case KernelKind::LogLimit:
        return alpha_ * alpha_ * std::exp((alpha_ - 1.0) * u) * u;
    case KernelKind::PureAttractive:
        return std::exp((alpha_ - 1.0) * u);
    }
    return kNaN;
}

RadialSample Kernel::sample(double r) const
{
    if (r == 0.0)
        return {value(0.0), 0.0};
    if (r < kTinyRadius)
        return {value(r), derivative(r) / r};

    const double u = std::log(r);
    const double r2 = r * r;
    switch (kind_) {
    case KernelKind::PowerLaw: {
        const double ea = std::exp(alpha_ * u);
        const double eb = std::exp(beta_ * u);
        return {ea / alpha_ - eb / beta_, (ea - eb) / r2};
    }
    case KernelKind::Rescaled: {
        const auto [hi, lo] = ordered(alpha_, beta_);
        const double value = -1.0 + (lo * std::expm1(hi * u) - hi * std::expm1(lo * u)) / (hi - lo);
        const double force = hi * lo * std::exp(lo * u) * std::expm1((hi - lo) * u) / ((hi - lo) * r2);
        return {value, force};
    }
    case KernelKind::LogLimit: {
        const double ea = std::exp(alpha_ * u);
        return {ea * (alpha_ * u - 1.0), alpha_ * alpha_ * ea * u / r2};
    }
    case KernelKind::PureAttractive: {
        const double ea = std::exp(alpha_ * u);
        return {ea / alpha_, ea / r2};
    }
    }
    return {kNaN, kNaN};
}

std::string Kernel::describe() const
{
    char buf[96];
    switch (kind_) {
    case KernelKind::PowerLaw:
        std::snprintf(buf, sizeof buf, "powerlaw(%g,%g)", alpha_, beta_);
        break;
    case KernelKind::Rescaled:
        std::snprintf(buf, sizeof buf, "rescaled(%g,%g)", alpha_, beta_);
        break;
    case KernelKind::LogLimit:
        std::snprintf(buf, sizeof buf, "loglimit(%g)", alpha_);
        break;
    case KernelKind::PureAttractive:
        std::snprintf(buf, sizeof buf, "attractive(%g)", alpha_);
        break;
    }
    return buf;
}

double zero_radius(double alpha, double beta)
{
    if (!(std::isfinite(alpha) && std::isfinite(beta)) || !(beta > 0.0) || !(alpha >= beta))
        throw DomainError("zero_radius requires alpha >= beta > 0");
    if (alpha == beta)
        return std::exp(1.0 / beta);
    const double gap = alpha - beta;
    return std::exp(std::log1p(gap / beta) / gap);
}

double dbeta_rescaled(double alpha, double beta, double r)
{
    if (alpha == 0.0 || alpha == beta)
        throw DomainError("dbeta_rescaled requires alpha != 0 and alpha != beta");
    if (!(r > 0.0))
        throw DomainError("dbeta_rescaled requires r > 0");
    const double gap = alpha - beta;
    const double u = gap * std::log(r);
    // t - 1 - log t with t = e^u, written to stay exact near t = 1
    const double bump = std::expm1(u) - u;
    return alpha * alpha * std::exp(beta * std::log(r)) * bump / (gap * gap);
}

}  // namespace mildrep
