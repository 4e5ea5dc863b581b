#pragma once

#include <Eigen/Dense>

#include "mildrep/measures.hpp"
#include "mildrep/potentials.hpp"

namespace mildrep {

/// Energy split into the attractive (higher power) and repulsive (lower
/// power) pair sums, with total = attractive_part - repulsive_part.
struct EnergyBreakdown {
    double total;
    double attractive_part;
    double repulsive_part;
};

/// Optimal second-moment scale, support radius and minimum energy for the
/// (4,2) power-law kernel in dimension n.
struct CornerCase {
    double lambda;
    double radius;
    double min_energy;
};

/// Interaction energy 1/2 sum_{i,j} w_i w_j w(|x_i - x_j|) over ordered
/// pairs, diagonal included (it vanishes because w(0) = 0).
/// Rows are accumulated in parallel for large supports; the reduction order
/// is fixed so the result does not depend on the thread count.
double energy(const DiscreteMeasure& mu, const Kernel& kernel);

/// Attractive/repulsive split. Defined for PowerLaw, Rescaled and
/// PureAttractive kernels; throws DomainError for LogLimit.
EnergyBreakdown energy_breakdown(const DiscreteMeasure& mu, const Kernel& kernel);

/// Closed form (n / (2(n+1))) w(d) for the uniform measure on a regular
/// n-simplex of diameter d.
double simplex_energy(int n, double d, const Kernel& kernel);

/// 8 E_{W_4}(mu0 - mu1) through the moment identity
///   4 Tr(J^2) + 2 (Tr J)^2,  J = I(mu0) - I(mu1).
/// Both inputs must be centered (barycenter norm <= 1e-9).
double quartic_quadratic_form(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1);

/// Gradient of the energy with respect to each particle position at fixed
/// weights, one column per point. Coincident points exert no force.
Eigen::MatrixXd gradient(const DiscreteMeasure& mu, const Kernel& kernel);

/// energy() and gradient() from a single pass over the pairs.
double energy_and_gradient(const DiscreteMeasure& mu, const Kernel& kernel, Eigen::MatrixXd& grad);

/// (W * mu)(x) = sum_i w_i w(|x - x_i|).
double convolve(const DiscreteMeasure& mu, const Kernel& kernel, const Eigen::VectorXd& x);

/// Spatial gradient of (W * mu) at x.
Eigen::VectorXd convolve_gradient(const DiscreteMeasure& mu, const Kernel& kernel, const Eigen::VectorXd& x);

CornerCase corner_case_constants(int n);

/// Membership test for the minimizers of the (4,2) energy: after centering,
/// every support radius is within tol of sqrt(n/(2n+2)) and
/// |I(mu) - Id/(2n+2)|_max <= tol.
bool verify_min42(const DiscreteMeasure& mu, double tol);

}  // namespace mildrep
