#include <doctest.h>

#include <cmath>

#include "mildrep/errors.hpp"
#include "mildrep/roots.hpp"
#include "mildrep/thresholds.hpp"
#include "support.hpp"

using namespace mildrep;

TEST_CASE("golden section finds interior maxima")
{
    const double x = argmax_unimodal([](double t) { return -(t - 3) * (t - 3); }, 2, 4, 1e-10);
    CHECK(std::abs(x - 3) <= 1e-9);

    const double b1 = argmax_unimodal([](double t) { return f_n(1, t); }, 2, 4, 1e-10);
    CHECK(b1 > 2.4);
    CHECK(b1 < 2.5);
    const double b2 = argmax_unimodal([](double t) { return f_n(2, t); }, 2, 4, 1e-10);
    CHECK(b2 > 2.7);
    CHECK(b2 < 2.9);
}

TEST_CASE("golden section rejects a maximum at the boundary")
{
    CHECK_THROWS_AS(argmax_unimodal([](double t) { return t; }, 0, 1, 1e-8), BracketError);
    CHECK_THROWS_AS(argmax_unimodal([](double t) { return -t; }, 0, 1, 1e-8), BracketError);
    CHECK_THROWS_AS(argmax_unimodal([](double t) { return t; }, 1, 0, 1e-8), BracketError);
}

TEST_CASE("golden section agrees with the derivative-sign oracle")
{
    for (int n = 1; n <= 10; ++n) {
        const double want = oracle::bisect([n](double t) { return oracle::fn_slope_sign(n, t); }, 2.0, 4.0);
        const double got = argmax_unimodal([n](double t) { return f_n(n, t); }, 2, 4, 1e-10);
        CHECK(std::abs(got - want) <= 1e-6);
    }
}

TEST_CASE("bisection on a sign change")
{
    const Bracket b = bisect_root([](double x) { return x * x - 2; }, 0, 2, 1e-14);
    CHECK(b.width() <= 1e-14);
    CHECK(b.contains(std::sqrt(2.0)));
    const Bracket exact = bisect_root([](double x) { return x - 1; }, 1, 3, 1e-12);
    CHECK(exact.lo == 1.0);
    CHECK(exact.hi == 1.0);
    CHECK_THROWS_AS(bisect_root([](double x) { return x * x + 1; }, -1, 1, 1e-12), BracketError);
}

TEST_CASE("bisection on a monotone predicate")
{
    const Bracket b = bisect_predicate([](double x) { return x >= 0.3; }, 0, 1, 1e-9);
    CHECK(b.width() <= 1e-9);
    CHECK(b.contains(0.3));
    CHECK_THROWS_AS(bisect_predicate([](double) { return true; }, 0, 1, 0.0), BracketError);
}
