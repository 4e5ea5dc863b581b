#include "mildrep/energy.hpp"

#include <cmath>
#include <vector>

#include "mildrep/errors.hpp"
#include "mildrep/parallel.hpp"

namespace mildrep {

namespace {

// Below this many points the thread start-up costs more than the pair loop.
constexpr Eigen::Index kParallelThreshold = 256;

constexpr double kCenteredTolerance = 1e-9;

template <class Row>
void for_each_row(Eigen::Index size, Row&& row)
{
    if (size >= kParallelThreshold) {
        parallel_for(static_cast<std::size_t>(size), [&](std::size_t i) { row(static_cast<Eigen::Index>(i)); });
    } else {
        for (Eigen::Index i = 0; i < size; ++i)
            row(i);
    }
}

double ordered_sum(const std::vector<double>& values)
{
    double total = 0.0;
    for (double v : values)
        total += v;
    return total;
}

}  // namespace

double energy(const DiscreteMeasure& mu, const Kernel& kernel)
{
    const Eigen::Index size = mu.size();
    std::vector<double> rows(static_cast<std::size_t>(size), 0.0);
    for_each_row(size, [&](Eigen::Index i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < size; ++j) {
            if (j == i)
                continue;
            acc += mu.weight(j) * kernel.value((mu.point(i) - mu.point(j)).norm());
        }
        rows[i] = mu.weight(i) * acc;
    });
    return 0.5 * ordered_sum(rows);
}

EnergyBreakdown energy_breakdown(const DiscreteMeasure& mu, const Kernel& kernel)
{
    double high = 0.0;
    double low = 0.0;
    double high_coeff = 0.0;
    double low_coeff = 0.0;
    switch (kernel.kind()) {
    case KernelKind::PowerLaw:
        high = kernel.alpha();
        low = kernel.beta();
        high_coeff = 1.0 / high;
        low_coeff = 1.0 / low;
        break;
    case KernelKind::Rescaled:
        high = std::max(kernel.alpha(), kernel.beta());
        low = std::min(kernel.alpha(), kernel.beta());
        high_coeff = low / (high - low);
        low_coeff = high / (high - low);
        break;
    case KernelKind::PureAttractive:
        high = kernel.alpha();
        high_coeff = 1.0 / high;
        break;
    case KernelKind::LogLimit:
        throw DomainError("log-limit kernel has no attractive/repulsive power split");
    }

    double attractive = 0.0;
    double repulsive = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        for (Eigen::Index j = 0; j < mu.size(); ++j) {
            if (i == j)
                continue;
            const double r = (mu.point(i) - mu.point(j)).norm();
            const double ww = mu.weight(i) * mu.weight(j);
            attractive += ww * high_coeff * pow_nonneg(r, high);
            if (low_coeff != 0.0)
                repulsive += ww * low_coeff * pow_nonneg(r, low);
        }
    }
    return {energy(mu, kernel), 0.5 * attractive, 0.5 * repulsive};
}

double simplex_energy(int n, double d, const Kernel& kernel)
{
    if (n < 1)
        throw DomainError("dimension must be >= 1");
    if (!(d > 0.0))
        throw DomainError("simplex diameter must be positive");
    return n / (2.0 * (n + 1)) * kernel.value(d);
}

double quartic_quadratic_form(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1)
{
    if (mu0.dim() != mu1.dim())
        throw DomainError("measures live in different dimensions");
    if (mu0.barycenter().norm() > kCenteredTolerance || mu1.barycenter().norm() > kCenteredTolerance)
        throw DomainError("quartic_quadratic_form requires centered measures");
    const MomentTensor diff = second_moment(mu0) - second_moment(mu1);
    const double trace = diff.trace();
    return 4.0 * (diff * diff).trace() + 2.0 * trace * trace;
}

double energy_and_gradient(const DiscreteMeasure& mu, const Kernel& kernel, Eigen::MatrixXd& grad)
{
    const Eigen::Index size = mu.size();
    grad.setZero(mu.dim(), size);
    std::vector<double> rows(static_cast<std::size_t>(size), 0.0);
    for_each_row(size, [&](Eigen::Index i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < size; ++j) {
            if (j == i)
                continue;
            const auto delta = mu.point(i) - mu.point(j);
            const RadialSample s = kernel.sample(delta.norm());
            acc += mu.weight(j) * s.value;
            grad.col(i) += (mu.weight(j) * s.force_factor) * delta;
        }
        rows[i] = mu.weight(i) * acc;
        grad.col(i) *= mu.weight(i);
    });
    return 0.5 * ordered_sum(rows);
}

Eigen::MatrixXd gradient(const DiscreteMeasure& mu, const Kernel& kernel)
{
    Eigen::MatrixXd grad;
    energy_and_gradient(mu, kernel, grad);
    return grad;
}

double convolve(const DiscreteMeasure& mu, const Kernel& kernel, const Eigen::VectorXd& x)
{
    double acc = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i)
        acc += mu.weight(i) * kernel.value((x - mu.point(i)).norm());
    return acc;
}

Eigen::VectorXd convolve_gradient(const DiscreteMeasure& mu, const Kernel& kernel, const Eigen::VectorXd& x)
{
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(x.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const Eigen::VectorXd delta = x - mu.point(i);
        grad += (mu.weight(i) * kernel.sample(delta.norm()).force_factor) * delta;
    }
    return grad;
}

CornerCase corner_case_constants(int n)
{
    if (n < 1)
        throw DomainError("dimension must be >= 1");
    // On the sphere of radius sqrt(n lambda) with I = lambda Id:
    //   2E = n^2 lambda^2 + n lambda^2 - n lambda, minimized at lambda = 1/(2n+2).
    const double lambda = 1.0 / (2.0 * n + 2.0);
    const double two_e = n * n * lambda * lambda + n * lambda * lambda - n * lambda;
    return {lambda, std::sqrt(n * lambda), 0.5 * two_e};
}

bool verify_min42(const DiscreteMeasure& mu, double tol)
{
    const int n = mu.dim();
    const CornerCase cc = corner_case_constants(n);
    const DiscreteMeasure centered = center(mu);
    for (Eigen::Index i = 0; i < centered.size(); ++i) {
        if (centered.weight(i) <= 0.0)
            continue;
        if (std::abs(centered.point(i).norm() - cc.radius) > tol)
            return false;
    }
    const MomentTensor target = cc.lambda * Eigen::MatrixXd::Identity(n, n);
    return (second_moment(centered) - target).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace mildrep
