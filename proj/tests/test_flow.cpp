#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mildrep/energy.hpp"
#include "mildrep/errors.hpp"
#include "mildrep/flow.hpp"
#include "support.hpp"

using namespace mildrep;

namespace {

FlowConfig small_config(int n, int particles, int restarts)
{
    FlowConfig c;
    c.n = n;
    c.particles = particles;
    c.restarts = restarts;
    c.seed = 3;
    return c;
}

std::vector<double> sorted_distances(const DiscreteMeasure& mu)
{
    std::vector<double> out;
    for (Eigen::Index i = 0; i < mu.size(); ++i)
        for (Eigen::Index j = i + 1; j < mu.size(); ++j)
            out.push_back((mu.point(i) - mu.point(j)).norm());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("replicated simplex is already stationary")
{
    for (int n = 1; n <= 3; ++n) {
        const DiscreteMeasure nu = unit_simplex(n);
        Eigen::MatrixXd pts(n, 4 * (n + 1));
        for (Eigen::Index i = 0; i < pts.cols(); ++i)
            pts.col(i) = nu.point(i % (n + 1));
        const FlowResult r = descend(small_config(n, 4 * (n + 1), 1), Kernel::power_law(4.3, 2.6),
                                     DiscreteMeasure::uniform(pts));
        CHECK(r.steps == 0);
        CHECK(r.converged);
        CHECK(r.max_gradient <= 1e-12);
        CHECK(r.classification.label == Classification::Label::UnitSimplex);
    }
}

TEST_CASE("single particle")
{
    Eigen::MatrixXd one(2, 1);
    one << 0.4, 0.1;
    const FlowResult r = descend(small_config(2, 1, 1), Kernel::power_law(4, 2), DiscreteMeasure::uniform(one));
    CHECK(r.converged);
    CHECK(r.steps == 0);
    CHECK(r.energy == 0.0);
    CHECK(r.final.point(0).norm() == 0.0);
}

TEST_CASE("descent contracts")
{
    gen::Rng rng(41);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 1 + trial % 3;
        const DiscreteMeasure init = gen::measure(rng, n, 12, 1.0);
        const Kernel k = trial % 2 == 0 ? Kernel::power_law(4.5, 2.5) : Kernel::power_law(3, 2);
        FlowConfig c = small_config(n, 12, 1);
        c.max_steps = 3000;
        const FlowResult r = descend(c, k, init);
        REQUIRE(r.energy_trace.size() == static_cast<std::size_t>(r.steps) + 1);
        // Accepted changes are strictly negative; the running total only
        // resolves them down to one ulp.
        for (std::size_t s = 1; s < r.energy_trace.size(); ++s)
            REQUIRE(r.energy_trace[s] <= r.energy_trace[s - 1]);
        CHECK(r.energy_trace.back() < r.energy_trace.front());
        CHECK(std::abs(r.energy - energy(r.final, k)) <= 1e-12);
        CHECK(std::abs(r.energy - r.energy_trace.back()) <= 1e-12);
        CHECK(r.final.barycenter().norm() <= 1e-12);
        CHECK(r.barycenter_drift <= 1e-10);
        CHECK(r.energy < oracle::energy(init, [&](double d) { return k.value(d); }));
    }
}

TEST_CASE("step budget")
{
    gen::Rng rng(42);
    FlowConfig c = small_config(2, 10, 1);
    c.max_steps = 1;
    const FlowResult r = descend(c, Kernel::power_law(4, 2), gen::measure(rng, 2, 10));
    CHECK(r.status == FlowStatus::MaxSteps);
    CHECK_FALSE(r.converged);
    CHECK(r.steps == 1);
    CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("property: descent commutes with rotations")
{
    gen::Rng rng(43);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 2 + trial % 2;
        const DiscreteMeasure init = center(gen::measure(rng, n, 10));
        const Eigen::MatrixXd q = gen::rotation(rng, n);
        FlowConfig c = small_config(n, 10, 1);
        c.max_steps = 25;
        const Kernel k = Kernel::power_law(4, 2.5);
        const FlowResult a = descend(c, k, init);
        const FlowResult b = descend(c, k, init.with_points(q * init.points()));
        CHECK(std::abs(a.energy - b.energy) <= 1e-12);
        const auto da = sorted_distances(a.final);
        const auto db = sorted_distances(b.final);
        for (std::size_t i = 0; i < da.size(); ++i)
            CHECK(std::abs(da[i] - db[i]) <= 1e-9);
    }
}

TEST_CASE("random initialization")
{
    const DiscreteMeasure a = random_ball_init(3, 50, 1.7, 9, 2);
    const DiscreteMeasure b = random_ball_init(3, 50, 1.7, 9, 2);
    const DiscreteMeasure c = random_ball_init(3, 50, 1.7, 9, 3);
    CHECK(a.points() == b.points());
    CHECK(a.points() != c.points());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        CHECK(a.point(i).norm() <= 1.7);
    CHECK_THROWS_AS(random_ball_init(2, 5, 0.0, 1, 0), DomainError);
}

TEST_CASE("default initialization radius")
{
    CHECK(default_init_radius(Kernel::power_law(4, 2)) == doctest::Approx(std::exp(0.5)));
    CHECK(default_init_radius(Kernel::log_limit(3.5)) == doctest::Approx(std::exp(1 / 3.5)));
    CHECK(default_init_radius(Kernel::pure_attractive(2)) == 1.0);
}

TEST_CASE("multistart at the corner case")
{
    const MultistartResult run = multistart(small_config(2, 40, 4), Kernel::power_law(4, 2));
    CHECK(run.restarts.size() == 4);
    CHECK(run.best.converged);
    CHECK(std::abs(run.best.energy + 2.0 / 24) <= 1e-6);
    CHECK(verify_min42(run.best.final, 1e-3));
    for (const auto& s : run.restarts)
        CHECK(run.best.energy <= s.energy);

    FlowConfig other = small_config(2, 40, 4);
    other.seed = 99;
    const MultistartResult second = multistart(other, Kernel::power_law(4, 2));
    CHECK((second_moment(run.best.final) - second_moment(second.best.final)).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("multistart is reproducible and thread-count independent")
{
    const FlowConfig c = small_config(2, 20, 6);
    const Kernel k = Kernel::power_law(5, 3);
    setenv("MILDREP_THREADS", "1", 1);
    const MultistartResult a = multistart(c, k);
    setenv("MILDREP_THREADS", "3", 1);
    const MultistartResult b = multistart(c, k);
    unsetenv("MILDREP_THREADS");
    CHECK(a.best.energy == b.best.energy);
    CHECK(a.best.restart_index == b.best.restart_index);
    CHECK(a.best.final.points() == b.best.final.points());
    CHECK(a.best.energy_trace == b.best.energy_trace);
}

TEST_CASE("multistart failures")
{
    FlowConfig c = small_config(2, 10, 3);
    c.init_radius = 1e200;
    CHECK_THROWS_AS(multistart(c, Kernel::power_law(4, 2)), ConvergenceError);

    CHECK_THROWS_AS(multistart(small_config(2, 2, 3), Kernel::power_law(4, 2)), DomainError);
    FlowConfig bad = small_config(2, 10, 3);
    bad.grad_tol = 0;
    CHECK_THROWS_AS(multistart(bad, Kernel::power_law(4, 2)), DomainError);
    bad = small_config(2, 10, 0);
    CHECK_THROWS_AS(multistart(bad, Kernel::power_law(4, 2)), DomainError);
}

TEST_CASE("simplex optimality probe")
{
    const SimplexProbe above = simplex_optimality_probe(2, 6, 2.5, small_config(2, 30, 6));
    CHECK(above.simplex_optimal);
    CHECK(std::abs(above.gap) <= 1e-6 * std::abs(above.simplex_energy));

    const SimplexProbe below = simplex_optimality_probe(2, 3, 2, small_config(2, 40, 3));
    CHECK_FALSE(below.simplex_optimal);
    CHECK(below.gap > 0);

    const SimplexProbe log_limit = simplex_optimality_probe(Kernel::log_limit(3.5), small_config(2, 30, 6));
    CHECK(log_limit.simplex_optimal);

    CHECK_THROWS_AS(simplex_optimality_probe(2, 3, 1.5, small_config(2, 30, 2)), DomainError);
}
