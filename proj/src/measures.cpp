#include "mildrep/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "mildrep/errors.hpp"

namespace mildrep {

namespace {

constexpr double kWeightSumTolerance = 1e-12;

// Union-find over point indices, used for single-linkage clustering.
class DisjointSets {
public:
    explicit DisjointSets(Eigen::Index n) : parent_(static_cast<std::size_t>(n))
    {
        std::iota(parent_.begin(), parent_.end(), Eigen::Index{0});
    }

    Eigen::Index find(Eigen::Index i)
    {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    void unite(Eigen::Index a, Eigen::Index b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<Eigen::Index> parent_;
};

void require_dimension(int n)
{
    if (n < 1)
        throw DomainError("dimension must be >= 1");
}

bool is_unit_simplex(const DiscreteMeasure& mu, double tol)
{
    const int n = mu.dim();
    const Eigen::Index size = mu.size();
    DisjointSets sets(size);
    for (Eigen::Index i = 0; i < size; ++i)
        for (Eigen::Index j = i + 1; j < size; ++j)
            if ((mu.point(i) - mu.point(j)).norm() <= tol)
                sets.unite(i, j);

    std::vector<Eigen::Index> roots;
    std::vector<Eigen::Index> cluster_of(static_cast<std::size_t>(size));
    for (Eigen::Index i = 0; i < size; ++i) {
        const Eigen::Index root = sets.find(i);
        auto it = std::find(roots.begin(), roots.end(), root);
        if (it == roots.end()) {
            roots.push_back(root);
            it = roots.end() - 1;
        }
        cluster_of[i] = it - roots.begin();
    }
    if (static_cast<int>(roots.size()) != n + 1)
        return false;

    Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(n, n + 1);
    Eigen::VectorXd masses = Eigen::VectorXd::Zero(n + 1);
    for (Eigen::Index i = 0; i < size; ++i) {
        centers.col(cluster_of[i]) += mu.weight(i) * mu.point(i);
        masses(cluster_of[i]) += mu.weight(i);
    }
    const double target = 1.0 / (n + 1);
    for (int c = 0; c <= n; ++c) {
        if (std::abs(masses(c) - target) > tol)
            return false;
        centers.col(c) /= masses(c);
    }
    for (int a = 0; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b)
            if (std::abs((centers.col(a) - centers.col(b)).norm() - 1.0) > tol)
                return false;
    return true;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights))
{
    if (points_.rows() < 1)
        throw DomainError("measure dimension must be >= 1");
    if (points_.cols() < 1)
        throw DomainError("measure needs at least one point");
    if (weights_.size() != points_.cols())
        throw DomainError("weights and points differ in length");
    if (!points_.allFinite() || !weights_.allFinite())
        throw DomainError("measure contains non-finite values");
    if ((weights_.array() < 0.0).any())
        throw DomainError("weights must be nonnegative");
    if (std::abs(weights_.sum() - 1.0) > kWeightSumTolerance)
        throw DomainError("weights must sum to 1");
}

DiscreteMeasure DiscreteMeasure::uniform(Eigen::MatrixXd points)
{
    const Eigen::Index size = points.cols();
    if (size < 1)
        throw DomainError("measure needs at least one point");
    Eigen::VectorXd weights = Eigen::VectorXd::Constant(size, 1.0 / static_cast<double>(size));
    return DiscreteMeasure(std::move(points), std::move(weights));
}

Eigen::VectorXd DiscreteMeasure::barycenter() const
{
    return points_ * weights_;
}

DiscreteMeasure DiscreteMeasure::with_points(Eigen::MatrixXd points) const
{
    if (points.rows() != points_.rows() || points.cols() != points_.cols())
        throw DomainError("replacement points have the wrong shape");
    return DiscreteMeasure(std::move(points), weights_);
}

double RadialMeasure::total_mass() const
{
    double total = 0.0;
    for (const auto& atom : atoms)
        total += atom.mass;
    return total;
}

double RadialMeasure::mass_at_zero() const
{
    return (!atoms.empty() && atoms.front().radius == 0.0) ? atoms.front().mass : 0.0;
}

std::string to_string(Classification::Label label)
{
    switch (label) {
    case Classification::Label::UnitSimplex:
        return "UnitSimplex";
    case Classification::Label::SphereMoment:
        return "SphereMoment";
    case Classification::Label::Other:
        return "Other";
    }
    return "Other";
}

DiscreteMeasure unit_simplex(int n, double d)
{
    require_dimension(n);
    if (!(d > 0.0) || !std::isfinite(d))
        throw DomainError("simplex diameter must be positive");

    // Orthonormal basis of the hyperplane orthogonal to (1,...,1) in R^{n+1}.
    Eigen::MatrixXd basis(n + 1, n);
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n + 1);
        v(k) = 1.0;
        v(k + 1) = -1.0;
        for (int j = 0; j < k; ++j)
            v -= basis.col(j).dot(v) * basis.col(j);
        basis.col(k) = v.normalized();
    }

    // Centered standard basis vectors e_i - (1/(n+1)) 1, scaled to diameter d.
    Eigen::MatrixXd vertices = Eigen::MatrixXd::Identity(n + 1, n + 1);
    vertices.array() -= 1.0 / (n + 1);
    vertices *= d / std::numbers::sqrt2;

    return DiscreteMeasure::uniform(basis.transpose() * vertices);
}

DiscreteMeasure cross_polytope(int n, double r)
{
    require_dimension(n);
    if (!(r > 0.0) || !std::isfinite(r))
        throw DomainError("cross-polytope radius must be positive");
    Eigen::MatrixXd points = Eigen::MatrixXd::Zero(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        points(i, 2 * i) = r;
        points(i, 2 * i + 1) = -r;
    }
    return DiscreteMeasure::uniform(std::move(points));
}

DiscreteMeasure sphere_quadrature(int n, double r, int count)
{
    if (n < 1 || n > 3)
        throw DomainError("sphere quadrature supports n in {1, 2, 3}");
    if (!(r > 0.0) || !std::isfinite(r))
        throw DomainError("sphere radius must be positive");
    if (count < 2 * n + 2)
        throw DomainError("sphere quadrature needs at least 2n+2 points");

    if (n == 1) {
        Eigen::MatrixXd points(1, 2);
        points << r, -r;
        return DiscreteMeasure::uniform(std::move(points));
    }

    Eigen::MatrixXd points(n, count);
    if (n == 2) {
        for (int k = 0; k < count; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / count;
            points(0, k) = r * std::cos(theta);
            points(1, k) = r * std::sin(theta);
        }
    } else {
        const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < count; ++k) {
            const double z = 1.0 - (2.0 * k + 1.0) / count;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden_angle * k;
            points(0, k) = r * rho * std::cos(phi);
            points(1, k) = r * rho * std::sin(phi);
            points(2, k) = r * z;
        }
    }
    return DiscreteMeasure::uniform(std::move(points));
}

MomentTensor second_moment(const DiscreteMeasure& mu)
{
    return mu.points() * mu.weights().asDiagonal() * mu.points().transpose();
}

DiscreteMeasure center(const DiscreteMeasure& mu)
{
    Eigen::MatrixXd shifted = mu.points().colwise() - mu.barycenter();
    return mu.with_points(std::move(shifted));
}

DiscreteMeasure mix(double t, const DiscreteMeasure& mu0, const DiscreteMeasure& mu1)
{
    if (!(t >= 0.0 && t <= 1.0))
        throw DomainError("mixing parameter must lie in [0, 1]");
    if (mu0.dim() != mu1.dim())
        throw DomainError("cannot mix measures of different dimension");
    Eigen::MatrixXd points(mu0.dim(), mu0.size() + mu1.size());
    points << mu0.points(), mu1.points();
    Eigen::VectorXd weights(mu0.size() + mu1.size());
    weights << t * mu0.weights(), (1.0 - t) * mu1.weights();
    return DiscreteMeasure(std::move(points), std::move(weights));
}

RadialMeasure distance_pushforward(const DiscreteMeasure& mu, double merge_tol)
{
    std::vector<RadialAtom> raw;
    raw.reserve(static_cast<std::size_t>(mu.size() * mu.size()));
    for (Eigen::Index i = 0; i < mu.size(); ++i)
        for (Eigen::Index j = 0; j < mu.size(); ++j)
            raw.push_back({i == j ? 0.0 : (mu.point(i) - mu.point(j)).norm(), mu.weight(i) * mu.weight(j)});
    std::sort(raw.begin(), raw.end(), [](const RadialAtom& a, const RadialAtom& b) { return a.radius < b.radius; });

    // Each merged atom keeps the radius of its smallest member, so r = 0 stays exact.
    RadialMeasure out;
    double anchor = -std::numeric_limits<double>::infinity();
    for (const auto& atom : raw) {
        if (!out.atoms.empty() && atom.radius - anchor <= merge_tol) {
            out.atoms.back().mass += atom.mass;
        } else {
            out.atoms.push_back(atom);
            anchor = atom.radius;
        }
    }
    return out;
}

Classification classify(const DiscreteMeasure& mu, double tol)
{
    if (!(tol > 0.0))
        throw DomainError("classification tolerance must be positive");
    const int n = mu.dim();

    if (is_unit_simplex(mu, tol))
        return {Classification::Label::UnitSimplex, std::sqrt(n / (2.0 * n + 2.0))};

    const DiscreteMeasure centered = center(mu);
    double r_min = std::numeric_limits<double>::infinity();
    double r_max = 0.0;
    for (Eigen::Index i = 0; i < centered.size(); ++i) {
        if (centered.weight(i) <= 0.0)
            continue;
        const double r = centered.point(i).norm();
        r_min = std::min(r_min, r);
        r_max = std::max(r_max, r);
    }
    const double r = 0.5 * (r_min + r_max);
    if (r_max - r <= tol) {
        const MomentTensor target = (r * r / n) * Eigen::MatrixXd::Identity(n, n);
        if ((second_moment(centered) - target).cwiseAbs().maxCoeff() <= tol)
            return {Classification::Label::SphereMoment, r};
    }
    return {Classification::Label::Other, std::numeric_limits<double>::quiet_NaN()};
}

}  // namespace mildrep
