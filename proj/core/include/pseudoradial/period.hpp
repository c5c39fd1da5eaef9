#pragma once
#include <limits>
#include <span>
#include <vector>

#include "pseudoradial/phase.hpp"

namespace pseudoradial {

/// Families of periodic orbits: those around the origin, launched at (0, s),
/// and those around the positive off-origin center, launched at (c, s).
enum class Region { Origin, Center };
enum class Monotone { Increasing, Decreasing };

/// Admissible launch speeds: the open interval (0, hi); hi may be infinite.
struct SRange {
    double hi = std::numeric_limits<double>::infinity();
    bool bounded() const noexcept { return hi < std::numeric_limits<double>::infinity(); }
};

struct PeriodSample {
    double s;
    double T;
};

/// Behaviour of T(s) at both ends of the admissible range.
struct PeriodLimits {
    double at_inner;  ///< limit as s -> 0
    double at_outer;  ///< limit as s -> range end
    Monotone monotone;
    SRange s_range;
};

bool region_exists(const Params& p, Region r) noexcept;
/// Upper end of the admissible launch speeds for the region.
SRange speed_range(const Params& p, Region r);
PhasePoint launch_point(const Params& p, Region r, double s);

/// Positive X with U(X) = s^2 on the branch swept by origin-region orbits.
double amplitude_from_speed(const Params& p, double s);

struct TurningPoints {
    double inner;
    double outer;
};

/// Abscissae y < c < z where the center-region orbit through (c, s) meets y = 0.
TurningPoints turning_points(const Params& p, double s);

/// T(s) = 4 X int_0^1 dtau / sqrt(U(X) - U(X tau)) by double-exponential quadrature.
double period_origin(const Params& p, double s);
/// T(s) = 2 int_y^z du / sqrt(U(c) + s^2 - U(u)), split at c.
double period_center(const Params& p, double s);
double period(const Params& p, Region r, double s);
std::vector<PeriodSample> period_curve(const Params& p, Region r, std::span<const double> s_values);

PeriodLimits period_limits(const Params& p, Region r);

/// Independent evaluations of period_origin, for cross-checking.
/// Sine route: x = X cos(psi) with adaptive Gauss-Legendre in psi.
double period_origin_sine_route(const Params& p, double s);
/// Direct route: integrate in x, with the inverse square-root singularity at X
/// subtracted and added back analytically.
double period_origin_direct(const Params& p, double s);

}  // namespace pseudoradial
