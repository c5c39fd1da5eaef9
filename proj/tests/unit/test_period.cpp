#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "pseudoradial/error.hpp"
#include "pseudoradial/integrate.hpp"
#include "pseudoradial/period.hpp"

using namespace pseudoradial;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

Errc code_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::InvalidArgument;
}

struct Case {
    Params p;
    Region region;
};

/// One representative per region case, including the derived ones.
const std::vector<Case>& all_cases()
{
    static const std::vector<Case> cases{
        {Params(-1, 3, 4), Region::Origin},    {Params(1, 3, 1), Region::Origin},
        {Params(-1, 0.5, 4), Region::Origin},  {Params(-1, 0.5, -1), Region::Origin},
        {Params(1, 0.5, 16), Region::Origin},  {Params(1, 0.5, 36), Region::Center},
        {Params(-1, 3, -4), Region::Center},   {Params(-1, 3, -4), Region::Origin},
        {Params(-1, 2, 0), Region::Origin},    {Params(-1, 0.5, 0), Region::Origin},
        {Params(1, 1.5, 2), Region::Origin},   {Params(1, 0.3, 3), Region::Center},
    };
    return cases;
}

std::vector<double> speeds(const Case& c, int n)
{
    const SRange r = speed_range(c.p, c.region);
    std::vector<double> s;
    for (int i = 0; i < n; ++i) {
        const double t = (i + 0.5) / n;
        s.push_back(r.bounded() ? r.hi * (0.001 + 0.998 * t) : std::pow(10.0, -3 + 5 * t));
    }
    return s;
}

}  // namespace

TEST_CASE("quadrature against the elliptic closed form (q = 3)")
{
    for (double s : {1e-4, 0.01, 0.5, 2.0, 30.0, 1e3}) {
        const double ref = oracle::duffing_period(-1, 4, s);
        CHECK(period_origin(Params(-1, 3, 4), s) == doctest::Approx(ref).epsilon(1e-12));
    }
    const double gamma = std::sqrt(0.5);
    for (double f : {1e-3, 0.2, 0.7, 0.99, 0.999999}) {
        const double ref = oracle::duffing_period(1, 1, f * gamma);
        CHECK(period_origin(Params(1, 3, 1), f * gamma) == doctest::Approx(ref).epsilon(1e-11));
    }
}

TEST_CASE("quadrature against independent RK4 over all cases")
{
    for (const auto& c : all_cases()) {
        for (double s : speeds(c, 4)) {
            CAPTURE(c.p.epsilon());
            CAPTURE(c.p.q());
            CAPTURE(c.p.mu());
            CAPTURE(s);
            const PhasePoint s0 = launch_point(c.p, c.region, s);
            const double T = period(c.p, c.region, s);
            // RK4 step scaled to the period; orbits through the nonsmooth origin (q < 1) need more steps
            const double h = T * (c.p.sublinear() && c.region == Region::Origin ? 1e-6 : 1e-5);
            CHECK(T == doctest::Approx(oracle::rk4_period(c.p, s0, h)).epsilon(1e-8));
        }
    }
}

TEST_CASE("three quadrature routes agree")
{
    for (const auto& c : all_cases()) {
        if (c.region != Region::Origin) continue;
        for (double s : speeds(c, 3)) {
            const double T = period_origin(c.p, s);
            CHECK(period_origin_sine_route(c.p, s) == doctest::Approx(T).epsilon(1e-11));
            CHECK(period_origin_direct(c.p, s) == doctest::Approx(T).epsilon(1e-10));
        }
    }
}

TEST_CASE("amplitude and turning points solve the energy balance")
{
    for (const auto& c : all_cases()) {
        for (double s : speeds(c, 5)) {
            if (c.region == Region::Origin) {
                const double X = amplitude_from_speed(c.p, s);
                CHECK(potential(c.p, X) == doctest::Approx(s * s).epsilon(1e-13));
            } else {
                const double cc = std::pow(std::abs(c.p.mu()), 1 / (c.p.q() - 1));
                const TurningPoints tp = turning_points(c.p, s);
                CHECK(tp.inner < cc);
                CHECK(tp.outer > cc);
                const double level = potential(c.p, cc) + s * s;
                CHECK(potential(c.p, tp.inner) == doctest::Approx(level).epsilon(1e-12));
                CHECK(potential(c.p, tp.outer) == doctest::Approx(level).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("separatrix speeds")
{
    // gamma^2 = U(c)
    CHECK(speed_range(Params(1, 3, 1), Region::Origin).hi == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(!speed_range(Params(-1, 3, 1), Region::Origin).bounded());
    const double c = 1.0 / 1296;  // 36^{1/(q-1)} with q = 1/2
    const double gamma = std::sqrt(-(36 * c * c - 4.0 / 3 * std::pow(c, 1.5)));
    CHECK(speed_range(Params(1, 0.5, 36), Region::Center).hi == doctest::Approx(gamma).epsilon(1e-14));
    // center orbits of (-1, 3, -4) are bounded by the loops through the saddle at 0: gamma^2 = -U(2) = 8
    CHECK(speed_range(Params(-1, 3, -4), Region::Center).hi == doctest::Approx(std::sqrt(8.0)).epsilon(1e-14));
    // approach the separatrix: amplitude tends to c, turning points tend to (0, x_*)
    const double X = amplitude_from_speed(Params(1, 3, 1), std::sqrt(0.5) * (1 - 1e-10));
    CHECK(X == doctest::Approx(1).epsilon(1e-4));
    const TurningPoints tp = turning_points(Params(1, 0.5, 36), gamma * (1 - 1e-10));
    CHECK(tp.inner < 1e-8);
    CHECK(tp.outer == doctest::Approx(std::pow(2.0 / 54, 2)).epsilon(1e-6));
}

TEST_CASE("period limits table")
{
    auto check = [](Params p, Region r, double inner, double outer, Monotone m) {
        const PeriodLimits lim = period_limits(p, r);
        auto same = [](double a, double b) { return std::isinf(b) ? a == b : a == doctest::Approx(b).epsilon(1e-15); };
        CHECK(same(lim.at_inner, inner));
        CHECK(same(lim.at_outer, outer));
        CHECK(lim.monotone == m);
    };
    check(Params(-1, 3, 4), Region::Origin, kPi, 0, Monotone::Decreasing);
    check(Params(1, 3, 1), Region::Origin, 2 * kPi, kInf, Monotone::Increasing);
    check(Params(-1, 0.5, 4), Region::Origin, 0, kPi, Monotone::Increasing);
    check(Params(-1, 0.5, -1), Region::Origin, 0, kInf, Monotone::Increasing);
    check(Params(1, 0.5, 16), Region::Origin, 2 * kPi, kPi / 2, Monotone::Decreasing);
    check(Params(1, 0.5, 36), Region::Center, 2 * kPi / std::sqrt(18), 2 * kPi / 3, Monotone::Increasing);
    check(Params(-1, 3, -4), Region::Center, 2 * kPi / std::sqrt(8), kInf, Monotone::Increasing);
    check(Params(-1, 3, -4), Region::Origin, kInf, 0, Monotone::Decreasing);
}

TEST_CASE("monotone on 50-point grids in the asserted direction")
{
    for (const auto& c : all_cases()) {
        const auto s = speeds(c, 50);
        const auto curve = period_curve(c.p, c.region, s);
        const bool up = period_limits(c.p, c.region).monotone == Monotone::Increasing;
        int violations = 0;
        for (std::size_t i = 1; i < curve.size(); ++i)
            if (up ? !(curve[i].T > curve[i - 1].T) : !(curve[i].T < curve[i - 1].T)) ++violations;
        CHECK(violations == 0);
    }
}

TEST_CASE("refusals")
{
    CHECK(code_of([] { period(Params(1, 3, -1), Region::Origin, 0.1); }) == Errc::WrongCase);
    CHECK(code_of([] { period(Params(-1, 3, 1), Region::Center, 0.1); }) == Errc::WrongCase);
    CHECK(code_of([] { period(Params(1, 3, 1), Region::Origin, 0.8); }) == Errc::OutOfRange);
    CHECK(code_of([] { period(Params(-1, 3, 1), Region::Origin, -1); }) == Errc::OutOfRange);
    CHECK(!region_exists(Params(1, 3, -1), Region::Origin));
    CHECK(region_exists(Params(-1, 3, -4), Region::Center));
}
