#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace mildrep {

/// Second moment tensor I(mu) = sum_i w_i x_i x_i^T.
using MomentTensor = Eigen::MatrixXd;

/**
 * Finitely supported probability measure on R^n.
 *
 * Points are stored column-wise (dim x size). The constructor checks that
 * there is at least one point, weights are nonnegative and sum to 1 within
 * 1e-12, and all coordinates are finite.
 */
class DiscreteMeasure {
public:
    DiscreteMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights);

    /// Equal weights on the given columns.
    static DiscreteMeasure uniform(Eigen::MatrixXd points);

    int dim() const { return static_cast<int>(points_.rows()); }
    Eigen::Index size() const { return points_.cols(); }
    const Eigen::MatrixXd& points() const { return points_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    auto point(Eigen::Index i) const { return points_.col(i); }
    double weight(Eigen::Index i) const { return weights_(i); }

    Eigen::VectorXd barycenter() const;

    /// Same weights, new positions (same shape).
    DiscreteMeasure with_points(Eigen::MatrixXd points) const;

private:
    Eigen::MatrixXd points_;
    Eigen::VectorXd weights_;
};

struct RadialAtom {
    double radius;
    double mass;
};

/// Probability measure on [0, inf), atoms sorted by radius.
struct RadialMeasure {
    std::vector<RadialAtom> atoms;

    double total_mass() const;
    /// Mass of the atom at radius 0 (0 if none).
    double mass_at_zero() const;
};

struct Classification {
    enum class Label { UnitSimplex, SphereMoment, Other };
    Label label = Label::Other;
    /// Sphere radius for SphereMoment, circumradius for UnitSimplex, NaN otherwise.
    double radius = 0.0;
};

std::string to_string(Classification::Label label);

/// Uniform measure on the n+1 vertices of a centered regular simplex of
/// diameter d in R^n. Vertices come from the standard basis of R^{n+1}
/// projected onto the hyperplane orthogonal to (1,...,1), expressed in the
/// Gram-Schmidt basis of e_1-e_2, e_2-e_3, ...
DiscreteMeasure unit_simplex(int n, double d = 1.0);

/// Equal masses 1/(2n) at +-r e_i.
DiscreteMeasure cross_polytope(int n, double r);

/// K-point approximation of the uniform probability on the centered sphere
/// of radius r. n = 1 gives the two points +-r (K is ignored), n = 2 gives K
/// equally spaced angles (second moment exact), n = 3 gives a Fibonacci
/// spiral whose second moment converges to (r^2/3) Id as K grows.
/// Requires n in {1, 2, 3} and K >= 2n + 2.
DiscreteMeasure sphere_quadrature(int n, double r, int points);

MomentTensor second_moment(const DiscreteMeasure& mu);

/// Translate so that the barycenter is at the origin.
DiscreteMeasure center(const DiscreteMeasure& mu);

/// Convex combination t mu0 + (1 - t) mu1 as a measure on the union of supports.
DiscreteMeasure mix(double t, const DiscreteMeasure& mu0, const DiscreteMeasure& mu1);

/// Law of |X - Y| for X, Y independent with law mu, including the diagonal
/// at r = 0. Radii closer than merge_tol are merged into one atom.
RadialMeasure distance_pushforward(const DiscreteMeasure& mu, double merge_tol = 1e-9);

/**
 * Labels a configuration.
 *
 * UnitSimplex: single-linkage clusters at threshold tol give exactly n+1
 * groups, all pairwise cluster distances are within tol of 1 and every
 * cluster mass is within tol of 1/(n+1).
 *
 * SphereMoment(r): after centering, every support radius lies within tol of
 * r and |I(mu) - (r^2/n) Id|_max <= tol.
 *
 * Checks run in that order; Other if neither holds.
 */
Classification classify(const DiscreteMeasure& mu, double tol);

}  // namespace mildrep
