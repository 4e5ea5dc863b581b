#include <doctest.h>

#include <cmath>

#include "mildrep/errors.hpp"
#include "mildrep/measures.hpp"
#include "support.hpp"

using namespace mildrep;

namespace {

double max_abs(const Eigen::MatrixXd& m)
{
    return m.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("measure validation")
{
    Eigen::MatrixXd pts(1, 2);
    pts << 0, 1;
    CHECK_THROWS_AS(DiscreteMeasure(pts, Eigen::Vector2d(0.5, 0.6)), DomainError);
    CHECK_THROWS_AS(DiscreteMeasure(pts, Eigen::Vector2d(1.5, -0.5)), DomainError);
    CHECK_THROWS_AS(DiscreteMeasure(pts, Eigen::Vector3d(0.5, 0.25, 0.25)), DomainError);
    CHECK_THROWS_AS(DiscreteMeasure(Eigen::MatrixXd(1, 0), Eigen::VectorXd(0)), DomainError);
    pts(0, 1) = NAN;
    CHECK_THROWS_AS(DiscreteMeasure(pts, Eigen::Vector2d(0.5, 0.5)), DomainError);
}

TEST_CASE("unit simplex in one dimension")
{
    const DiscreteMeasure mu = unit_simplex(1, 1.0);
    REQUIRE(mu.size() == 2);
    CHECK(std::abs(std::abs(mu.points()(0, 0)) - 0.5) <= 1e-15);
    CHECK(std::abs(mu.points()(0, 0) + mu.points()(0, 1)) <= 1e-15);
    CHECK(mu.weight(0) == 0.5);
    CHECK(mu.weight(1) == 0.5);
}

TEST_CASE("unit simplex geometry")
{
    for (int n = 1; n <= 8; ++n) {
        for (double d : {1.0, 0.9, 2.5}) {
            const DiscreteMeasure mu = unit_simplex(n, d);
            REQUIRE(mu.size() == n + 1);
            CHECK(mu.barycenter().norm() <= 1e-14);
            for (Eigen::Index i = 0; i < mu.size(); ++i) {
                CHECK(std::abs(mu.point(i).squaredNorm() - d * d * n / (2.0 * n + 2)) <= 1e-13);
                for (Eigen::Index j = i + 1; j < mu.size(); ++j)
                    CHECK(std::abs((mu.point(i) - mu.point(j)).norm() - d) <= 1e-12);
            }
            const Eigen::MatrixXd want = d * d / (2.0 * n + 2) * Eigen::MatrixXd::Identity(n, n);
            CHECK(max_abs(second_moment(mu) - want) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(unit_simplex(0), DomainError);
    CHECK_THROWS_AS(unit_simplex(2, 0.0), DomainError);
}

TEST_CASE("cross polytope")
{
    for (int n = 1; n <= 5; ++n) {
        const double r = 0.6;
        const DiscreteMeasure mu = cross_polytope(n, r);
        REQUIRE(mu.size() == 2 * n);
        for (Eigen::Index i = 0; i < mu.size(); ++i)
            CHECK(std::abs(mu.point(i).norm() - r) <= 1e-15);
        CHECK(max_abs(second_moment(mu) - r * r / n * Eigen::MatrixXd::Identity(n, n)) <= 1e-15);
    }
    const DiscreteMeasure line = cross_polytope(1, 0.4);
    CHECK(std::abs(std::abs(line.points()(0, 0) - line.points()(0, 1)) - 0.8) <= 1e-15);
}

TEST_CASE("sphere quadrature")
{
    const DiscreteMeasure circle = sphere_quadrature(2, 1.0, 12);
    CHECK(max_abs(second_moment(circle) - 0.5 * Eigen::MatrixXd::Identity(2, 2)) <= 1e-12);
    CHECK(std::abs(circle.weights().sum() - 1) <= 1e-15);

    const DiscreteMeasure two = sphere_quadrature(1, 0.7, 4);
    REQUIRE(two.size() == 2);
    CHECK(std::abs(second_moment(two)(0, 0) - 0.49) <= 1e-15);

    const DiscreteMeasure sphere = sphere_quadrature(3, 1.0, 2048);
    CHECK(max_abs(second_moment(sphere) - Eigen::MatrixXd::Identity(3, 3) / 3.0) <= 1e-4);
    for (Eigen::Index i = 0; i < sphere.size(); ++i)
        CHECK(std::abs(sphere.point(i).norm() - 1.0) <= 1e-14);

    CHECK_THROWS_AS(sphere_quadrature(4, 1.0, 100), DomainError);
    CHECK_THROWS_AS(sphere_quadrature(2, 1.0, 5), DomainError);
}

TEST_CASE("second moment against an elementwise loop")
{
    gen::Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const DiscreteMeasure mu = gen::measure(rng, gen::integer(rng, 1, 4), 50);
        CHECK(max_abs(second_moment(mu) - oracle::second_moment(mu)) <= 1e-14);
    }
    Eigen::MatrixXd origin = Eigen::MatrixXd::Zero(3, 1);
    CHECK(max_abs(second_moment(DiscreteMeasure::uniform(origin))) == 0.0);
}

TEST_CASE("centering")
{
    const DiscreteMeasure simplex = unit_simplex(3);
    CHECK(max_abs(center(simplex).points() - simplex.points()) <= 1e-15);

    Eigen::MatrixXd one(2, 1);
    one << 3, -4;
    CHECK(center(DiscreteMeasure::uniform(one)).point(0).norm() == 0.0);

    gen::Rng rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        const DiscreteMeasure mu = gen::measure(rng, 3, 17, 5.0);
        const DiscreteMeasure once = center(mu);
        CHECK(once.barycenter().norm() <= 1e-12);
        CHECK(max_abs(center(once).points() - once.points()) <= 1e-14);
    }
}

TEST_CASE("distance pushforward")
{
    for (int n = 1; n <= 5; ++n) {
        const RadialMeasure r = distance_pushforward(unit_simplex(n));
        REQUIRE(r.atoms.size() == 2);
        CHECK(r.atoms[0].radius == 0.0);
        CHECK(std::abs(r.atoms[0].mass - 1.0 / (n + 1)) <= 1e-14);
        CHECK(std::abs(r.atoms[1].radius - 1.0) <= 1e-12);
        CHECK(std::abs(r.atoms[1].mass - n / (n + 1.0)) <= 1e-14);
    }

    Eigen::MatrixXd one(2, 1);
    one << 1, 1;
    const RadialMeasure single = distance_pushforward(DiscreteMeasure::uniform(one));
    REQUIRE(single.atoms.size() == 1);
    CHECK(single.atoms[0].radius == 0.0);
    CHECK(single.atoms[0].mass == 1.0);

    gen::Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const DiscreteMeasure mu = gen::measure(rng, 2, 25);
        const RadialMeasure r = distance_pushforward(mu);
        CHECK(std::abs(r.total_mass() - 1.0) <= 1e-12);
        CHECK(std::abs(r.mass_at_zero() - mu.weights().squaredNorm()) <= 1e-15);
        for (std::size_t k = 1; k < r.atoms.size(); ++k)
            CHECK(r.atoms[k].radius > r.atoms[k - 1].radius);
    }
}

TEST_CASE("mixing is linear in the second moment")
{
    gen::Rng rng(24);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = gen::integer(rng, 1, 4);
        const DiscreteMeasure a = gen::measure(rng, n, gen::integer(rng, 1, 20));
        const DiscreteMeasure b = gen::measure(rng, n, gen::integer(rng, 1, 20));
        const double t = gen::uniform(rng, 0, 1);
        const Eigen::MatrixXd want = t * second_moment(a) + (1 - t) * second_moment(b);
        CHECK(max_abs(second_moment(mix(t, a, b)) - want) <= 1e-14);
    }
}

TEST_CASE("classification")
{
    const Classification simplex = classify(unit_simplex(2), 1e-6);
    CHECK(simplex.label == Classification::Label::UnitSimplex);
    CHECK(std::abs(simplex.radius - std::sqrt(1.0 / 3.0)) <= 1e-12);

    const Classification cross = classify(cross_polytope(3, 0.6), 1e-6);
    CHECK(cross.label == Classification::Label::SphereMoment);
    CHECK(std::abs(cross.radius - 0.6) <= 1e-12);

    // Unequal masses at distance 0.8: neither a simplex nor a balanced sphere.
    Eigen::MatrixXd pts(1, 2);
    pts << 0.0, 0.8;
    const Classification other = classify(DiscreteMeasure(pts, Eigen::Vector2d(0.3, 0.7)), 1e-3);
    CHECK(other.label == Classification::Label::Other);
    CHECK(std::isnan(other.radius));

    // Equal masses at distance 0.8 are the centered sphere of radius 0.4 in
    // one dimension, and I = 0.16 = r^2/n.
    const Classification balanced = classify(DiscreteMeasure::uniform(pts), 1e-3);
    CHECK(balanced.label == Classification::Label::SphereMoment);
    CHECK(std::abs(balanced.radius - 0.4) <= 1e-12);

    // Clusters of equal occupancy count as the simplex.
    Eigen::MatrixXd clustered(2, 30);
    const DiscreteMeasure tri = unit_simplex(2);
    for (int i = 0; i < 30; ++i)
        clustered.col(i) = tri.point(i % 3) + 1e-5 * Eigen::Vector2d(std::cos(i), std::sin(i));
    CHECK(classify(DiscreteMeasure::uniform(clustered), 1e-3).label == Classification::Label::UnitSimplex);

    // 11/10/9 occupancy misses 1/3 by more than tol.
    Eigen::MatrixXd uneven(2, 30);
    for (int i = 0; i < 30; ++i)
        uneven.col(i) = tri.point(i < 11 ? 0 : (i < 21 ? 1 : 2));
    CHECK(classify(DiscreteMeasure::uniform(uneven), 1e-3).label != Classification::Label::UnitSimplex);

    CHECK(classify(unit_simplex(2, 0.9), 1e-6).label != Classification::Label::UnitSimplex);
    CHECK_THROWS_AS(classify(unit_simplex(2), 0.0), DomainError);
}

TEST_CASE("property: higher moments dominate powers of lower moments")
{
    gen::Rng rng(25);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = gen::integer(rng, 1, 4);
        const DiscreteMeasure mu = gen::measure(rng, n, gen::integer(rng, 1, 12), 2.0);
        const double p = gen::uniform(rng, 0.1, 4.0);
        const double q = p + gen::uniform(rng, 0.01, 4.0);
        double mp = 0.0;
        double mq = 0.0;
        for (Eigen::Index i = 0; i < mu.size(); ++i) {
            const double r = mu.point(i).norm();
            mp += mu.weight(i) * std::pow(r, p);
            mq += mu.weight(i) * std::pow(r, q);
        }
        REQUIRE(mq >= std::pow(mp, q / p) - 1e-12);
    }
    // Equality on a sphere.
    const DiscreteMeasure sphere = cross_polytope(3, 0.8);
    double mp = 0.0;
    double mq = 0.0;
    for (Eigen::Index i = 0; i < sphere.size(); ++i) {
        mp += sphere.weight(i) * std::pow(sphere.point(i).norm(), 1.5);
        mq += sphere.weight(i) * std::pow(sphere.point(i).norm(), 3.0);
    }
    CHECK(std::abs(mq - std::pow(mp, 2.0)) <= 1e-14);
}
