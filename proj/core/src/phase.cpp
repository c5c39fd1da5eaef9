#include "pseudoradial/phase.hpp"

#include <cmath>
#include <string>

#include "pseudoradial/error.hpp"

namespace pseudoradial {

namespace {
/// |U''(c)| below this is treated as a degenerate equilibrium.
constexpr double kDegenerateCurvature = 1e-12;
}

double signed_pow(double x, double p) noexcept
{
    if (x == 0) return 0;
    const double m = std::pow(std::abs(x), p);
    return x < 0 ? -m : m;
}

Params::Params(int epsilon, double q, double mu) : epsilon_(epsilon), q_(q), mu_(mu)
{
    if (epsilon != 1 && epsilon != -1)
        throw Error(Errc::InvalidArgument, "epsilon must be +1 or -1");
    if (!std::isfinite(q) || !(q > 0) || q == 1)
        throw Error(Errc::InvalidArgument, "q must be positive and different from 1");
    if (!std::isfinite(mu))
        throw Error(Errc::InvalidArgument, "mu must be finite");
}

double potential(const Params& p, double x) noexcept
{
    return p.mu() * x * x - 2.0 * p.epsilon() / (p.q() + 1) * std::pow(std::abs(x), p.q() + 1);
}

double potential_slope(const Params& p, double x) noexcept
{
    return 2 * p.mu() * x - 2.0 * p.epsilon() * signed_pow(x, p.q());
}

double potential_curvature(const Params& p, double x) noexcept
{
    return 2 * p.mu() - 2.0 * p.epsilon() * p.q() * std::pow(std::abs(x), p.q() - 1);
}

double restoring_force(const Params& p, double x) noexcept
{
    return -p.mu() * x + p.epsilon() * signed_pow(x, p.q());
}

PhasePoint vector_field(const Params& p, PhasePoint s) noexcept
{
    return {s.y, restoring_force(p, s.x)};
}

double energy(const Params& p, PhasePoint s) noexcept
{
    return s.y * s.y + potential(p, s.x);
}

bool has_off_origin_equilibria(const Params& p) noexcept
{
    return p.mu() * p.epsilon() > 0;
}

double equilibrium_abscissa(const Params& p) noexcept
{
    return std::pow(std::abs(p.mu()), 1 / (p.q() - 1));
}

std::optional<double> potential_zero(const Params& p) noexcept
{
    if (!has_off_origin_equilibria(p)) return std::nullopt;
    return std::pow((p.q() + 1) * std::abs(p.mu()) / 2, 1 / (p.q() - 1));
}

CriticalSet critical_points(const Params& p)
{
    CriticalSet set;
    CriticalKind origin;
    if (p.sublinear())
        origin = CriticalKind::SingularOrigin;
    else if (p.mu() > 0)
        origin = CriticalKind::Center;
    else if (p.mu() < 0)
        origin = CriticalKind::Saddle;
    else  // U = -2 eps |x|^{q+1}/(q+1): strict minimum iff eps = -1
        origin = p.epsilon() < 0 ? CriticalKind::Center : CriticalKind::Saddle;
    set.points.push_back({{0, 0}, origin});

    if (has_off_origin_equilibria(p)) {
        const double c = equilibrium_abscissa(p);
        const double curvature = potential_curvature(p, c);
        if (std::abs(curvature) < kDegenerateCurvature)
            throw Error(Errc::DegenerateCriticalPoint,
                        "U''(c) = " + std::to_string(curvature) + " at c = " + std::to_string(c));
        const CriticalKind kind = curvature > 0 ? CriticalKind::Center : CriticalKind::Saddle;
        set.points.push_back({{-c, 0}, kind});
        set.points.push_back({{c, 0}, kind});
    }
    return set;
}

double OrbitEquation::operator()(double x) const noexcept
{
    return level_ - potential(params_, x);
}

OrbitEquation orbit_equation(const Params& p, PhasePoint s0)
{
    return OrbitEquation(p, energy(p, s0));
}

double homoclinic_apex(const Params& p)
{
    if (!(p.epsilon() == 1 && p.sublinear() && p.mu() > 0))
        throw Error(Errc::NoSpecialOrbit, "homoclinic loops need eps = +1, q < 1, mu > 0");
    return std::pow(2 / ((1 + p.q()) * p.mu()), 1 / (1 - p.q()));
}

std::vector<SpecialOrbit> special_orbits(const Params& p)
{
    const bool heteroclinic = (p.epsilon() == 1 && !p.sublinear() && p.mu() > 0) ||
                              (p.epsilon() == -1 && p.sublinear() && p.mu() < 0);
    if (heteroclinic) {
        const double c = equilibrium_abscissa(p);
        const OrbitEquation eq(p, potential(p, c));
        return {{SpecialOrbitKind::HeteroclinicUpper, eq, -c, c},
                {SpecialOrbitKind::HeteroclinicLower, eq, -c, c}};
    }
    if (p.epsilon() == 1 && p.sublinear() && p.mu() > 0) {
        const double apex = homoclinic_apex(p);
        const OrbitEquation eq(p, 0.0);
        return {{SpecialOrbitKind::HomoclinicRight, eq, 0, apex},
                {SpecialOrbitKind::HomoclinicLeft, eq, -apex, 0}};
    }
    throw Error(Errc::NoSpecialOrbit, "no heteroclinic or homoclinic orbit for these parameters");
}

}  // namespace pseudoradial
