#pragma once
#include <optional>
#include <vector>

namespace pseudoradial {

/// sign(x)|x|^p, with 0 mapped to 0 for every p.
double signed_pow(double x, double p) noexcept;

/// Parameters of w'' + mu w = eps w|w|^{q-1}.
class Params {
public:
    Params(int epsilon, double q, double mu);

    int epsilon() const noexcept { return epsilon_; }
    double q() const noexcept { return q_; }
    double mu() const noexcept { return mu_; }
    bool sublinear() const noexcept { return q_ < 1; }

    friend bool operator==(const Params&, const Params&) = default;

private:
    int epsilon_;
    double q_;
    double mu_;
};

struct PhasePoint {
    double x = 0;
    double y = 0;
    friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// U(x) = mu x^2 - 2 eps |x|^{q+1} / (q+1); orbits are level sets of y^2 + U(x).
double potential(const Params& p, double x) noexcept;
/// U'(x)
double potential_slope(const Params& p, double x) noexcept;
/// U''(x); infinite at x = 0 when q < 1.
double potential_curvature(const Params& p, double x) noexcept;

/// Right-hand side Q(x) = -mu x + eps sign(x)|x|^q.
double restoring_force(const Params& p, double x) noexcept;
PhasePoint vector_field(const Params& p, PhasePoint s) noexcept;
double energy(const Params& p, PhasePoint s) noexcept;

/// True when the off-origin equilibria (+-c, 0) exist, i.e. mu / eps > 0.
bool has_off_origin_equilibria(const Params& p) noexcept;
/// c = |mu|^{1/(q-1)}; meaningful only when the off-origin equilibria exist.
double equilibrium_abscissa(const Params& p) noexcept;
/// Positive root of U, when U has one.
std::optional<double> potential_zero(const Params& p) noexcept;

enum class CriticalKind { Center, Saddle, SingularOrigin };

struct CriticalPoint {
    PhasePoint location;
    CriticalKind kind;
};

struct CriticalSet {
    std::vector<CriticalPoint> points;
};

/// Origin first, then (-c, 0) and (c, 0) when present.
CriticalSet critical_points(const Params& p);

/// m(x) = E - U(x) for a fixed level E; the orbit through a point is y^2 = m(x).
class OrbitEquation {
public:
    OrbitEquation(const Params& p, double level) : params_(p), level_(level) {}
    double operator()(double x) const noexcept;
    double level() const noexcept { return level_; }
    const Params& params() const noexcept { return params_; }

private:
    Params params_;
    double level_;
};

OrbitEquation orbit_equation(const Params& p, PhasePoint s0);

enum class SpecialOrbitKind { HeteroclinicUpper, HeteroclinicLower, HomoclinicRight, HomoclinicLeft };

struct SpecialOrbit {
    SpecialOrbitKind kind;
    OrbitEquation equation;
    double x_min;
    double x_max;
};

/// Heteroclinic pair joining (+-c, 0), or homoclinic pair at the singular origin.
std::vector<SpecialOrbit> special_orbits(const Params& p);

/// Abscissa of the homoclinic apex, ((q+1) mu / 2)^{1/(q-1)}; eps = +1, q < 1, mu > 0 only.
double homoclinic_apex(const Params& p);

}  // namespace pseudoradial
