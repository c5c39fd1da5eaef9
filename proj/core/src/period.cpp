#include "pseudoradial/period.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "pseudoradial/error.hpp"
#include "pseudoradial/quadrature.hpp"

namespace pseudoradial {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
/// Speeds within this relative distance of the separatrix speed are refused.
constexpr double kSeparatrixGuard = 1e-12;
constexpr double kQuadTol = 1e-13;
/// Accepted size of the last refinement change, relative to the value.
constexpr double kQuadAccept = 1e-8;

/// The six regimes of origin-centred oscillation.
enum class OriginCase {
    DefocusingSuper,     ///< eps = -1, q > 1, mu >= 0
    FocusingSuper,       ///< eps = +1, q > 1, mu > 0
    DefocusingSub,       ///< eps = -1, q < 1, mu >= 0
    DefocusingSubNeg,    ///< eps = -1, q < 1, mu < 0
    FocusingSub,         ///< eps = +1, q < 1, mu > 0
    DefocusingSuperNeg,  ///< eps = -1, q > 1, mu < 0
};

std::optional<OriginCase> origin_case(const Params& p)
{
    const bool sub = p.sublinear();
    if (p.epsilon() == 1) {
        if (!(p.mu() > 0)) return std::nullopt;
        return sub ? OriginCase::FocusingSub : OriginCase::FocusingSuper;
    }
    if (sub) return p.mu() >= 0 ? OriginCase::DefocusingSub : OriginCase::DefocusingSubNeg;
    return p.mu() >= 0 ? OriginCase::DefocusingSuper : OriginCase::DefocusingSuperNeg;
}

OriginCase require_origin_case(const Params& p)
{
    auto c = origin_case(p);
    if (!c) throw Error(Errc::WrongCase, "no periodic orbits around the origin for eps = +1, mu <= 0");
    return *c;
}

bool center_exists(const Params& p)
{
    return (p.epsilon() == 1 && p.sublinear() && p.mu() > 0) ||
           (p.epsilon() == -1 && !p.sublinear() && p.mu() < 0);
}

void require_center(const Params& p)
{
    if (!center_exists(p)) throw Error(Errc::WrongCase, "no center off the origin for these parameters");
}

/// Root of an increasing function on [lo, hi] with f(lo) <= 0 <= f(hi),
/// refined until the bracket cannot shrink.
template <class F>
double solve_increasing(F&& f, double lo, double hi)
{
    for (int it = 0; it < 4000; ++it) {
        double mid;
        if (lo == 0)
            mid = hi / 16;
        else if (hi / lo > 2)
            mid = std::sqrt(lo) * std::sqrt(hi);
        else
            mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        if (f(mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    return std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
}

/// a^p - (a(1+r))^p for a > 0, r > -1, without forming a(1+r).
double pow_diff(double a, double r, double p)
{
    if (std::abs(r) < 0.5) return -std::pow(a, p) * std::expm1(p * std::log1p(r));
    return std::pow(a, p) * (1 - std::pow(1 + r, p));
}

void check_speed(const Params& p, Region r, double s)
{
    if (!std::isfinite(s) || !(s > 0)) throw Error(Errc::OutOfRange, "launch speed must be positive and finite");
    const SRange range = speed_range(p, r);
    if (range.bounded() && range.hi - s <= kSeparatrixGuard * range.hi)
        throw Error(Errc::OutOfRange, "launch speed " + std::to_string(s) + " is not below the separatrix speed " +
                                          std::to_string(range.hi));
}

/// U(X) - U(X tau) with delta = 1 - tau given exactly.
/// For tau <= 1/2 the left end uses s^2 in place of U(X) to avoid cancellation when s is small.
double origin_gap(const Params& p, double X, double s2, double tau, double delta)
{
    if (tau <= 0.5) return s2 - potential(p, X * tau);
    const double q1 = p.q() + 1;
    const double one_minus_tau2 = delta * (1 + tau);
    const double one_minus_pow = -std::expm1(q1 * std::log1p(-delta));
    return p.mu() * X * X * one_minus_tau2 - 2.0 * p.epsilon() / q1 * std::pow(X, q1) * one_minus_pow;
}

/// (U(c + v c) - U(c)) / (mu c^2) = v^2 + 2v - 2((1+v)^{q+1} - 1)/(q+1).
double center_shape(double q, double v)
{
    if (std::abs(v) < 0.1) {
        // v^2 - sum_{n>=2} a_n v^n, a_2 = q, a_{n+1} = a_n (q - n + 1)/(n + 1)
        double a = q, vn = v * v, sum = (1 - q) * vn;
        for (int n = 2; n < 80; ++n) {
            a *= (q - n + 1) / (n + 1);
            vn *= v;
            const double term = a * vn;
            sum -= term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return v * v + 2 * v - 2 / (q + 1) * std::expm1((q + 1) * std::log1p(v));
}

double integrate_unit(auto&& f, const char* what)
{
    const quad::Result r = quad::tanh_sinh_unit(f, kQuadTol, 12);
    if (!std::isfinite(r.value) || r.error > kQuadAccept * std::abs(r.value))
        throw Error(Errc::QuadratureFailure, std::string(what) + ": quadrature did not converge");
    return r.value;
}

double inv_sqrt_or_zero(double g) { return g > 0 ? 1 / std::sqrt(g) : 0.0; }

}  // namespace

bool region_exists(const Params& p, Region r) noexcept
{
    return r == Region::Origin ? origin_case(p).has_value() : center_exists(p);
}

SRange speed_range(const Params& p, Region r)
{
    if (r == Region::Center) {
        require_center(p);
        return {std::sqrt(-potential(p, equilibrium_abscissa(p)))};
    }
    const OriginCase c = require_origin_case(p);
    if (c == OriginCase::FocusingSuper || c == OriginCase::DefocusingSubNeg)
        return {std::sqrt(potential(p, equilibrium_abscissa(p)))};
    return {};
}

PhasePoint launch_point(const Params& p, Region r, double s)
{
    if (r == Region::Origin) {
        require_origin_case(p);
        return {0, s};
    }
    require_center(p);
    return {equilibrium_abscissa(p), s};
}

double amplitude_from_speed(const Params& p, double s)
{
    const OriginCase oc = require_origin_case(p);
    check_speed(p, Region::Origin, s);
    const double s2 = s * s;
    auto f = [&](double x) { return potential(p, x) - s2; };

    double lo = 0;
    if (oc == OriginCase::FocusingSub) lo = homoclinic_apex(p);
    if (oc == OriginCase::DefocusingSuperNeg) lo = *potential_zero(p);
    double hi;
    if (oc == OriginCase::FocusingSuper || oc == OriginCase::DefocusingSubNeg) {
        hi = equilibrium_abscissa(p);
    } else {
        hi = std::max(2 * lo, 1.0);
        while (f(hi) < 0) hi *= 2;
    }
    return solve_increasing(f, lo, hi);
}

TurningPoints turning_points(const Params& p, double s)
{
    require_center(p);
    check_speed(p, Region::Center, s);
    const double c = equilibrium_abscissa(p), q = p.q();
    const double scale = p.mu() * c * c;
    const double s2 = s * s;
    const double w_in = solve_increasing([&](double w) { return scale * center_shape(q, -w) - s2; }, 0.0, 1.0);
    const double v_zero = *potential_zero(p) / c - 1;
    const double v_out = solve_increasing([&](double v) { return scale * center_shape(q, v) - s2; }, 0.0, v_zero);
    return {c * (1 - w_in), c * (1 + v_out)};
}

double period_origin(const Params& p, double s)
{
    const double X = amplitude_from_speed(p, s);
    const double s2 = s * s;
    const double I = integrate_unit(
        [&](double tau, double delta) { return inv_sqrt_or_zero(origin_gap(p, X, s2, tau, delta)); },
        "period_origin");
    return 4 * X * I;
}

double period_center(const Params& p, double s)
{
    const TurningPoints tp = turning_points(p, s);
    const double c = equilibrium_abscissa(p), q = p.q(), mu = p.mu(), eps = p.epsilon();
    const double scale = mu * c * c;
    const double s2 = s * s;
    const double k = 2.0 * eps / (q + 1);
    const double y = tp.inner, z = tp.outer;
    const double len_r = z - c, len_l = c - y;

    const double right = integrate_unit(
        [&](double tau, double delta) {
            if (tau <= 0.5) return inv_sqrt_or_zero(s2 - scale * center_shape(q, len_r * tau / c));
            const double du = len_r * delta;
            return inv_sqrt_or_zero(mu * du * (2 * z - du) - k * pow_diff(z, -du / z, q + 1));
        },
        "period_center");
    const double left = integrate_unit(
        [&](double tau, double delta) {
            if (tau <= 0.5) return inv_sqrt_or_zero(s2 - scale * center_shape(q, -len_l * tau / c));
            const double du = len_l * delta;
            return inv_sqrt_or_zero(-mu * du * (2 * y + du) - k * pow_diff(y, du / y, q + 1));
        },
        "period_center");
    return 2 * (len_r * right + len_l * left);
}

double period(const Params& p, Region r, double s)
{
    return r == Region::Origin ? period_origin(p, s) : period_center(p, s);
}

std::vector<PeriodSample> period_curve(const Params& p, Region r, std::span<const double> s_values)
{
    std::vector<PeriodSample> out;
    out.reserve(s_values.size());
    for (double s : s_values) out.push_back({s, period(p, r, s)});
    return out;
}

PeriodLimits period_limits(const Params& p, Region r)
{
    const double mu = p.mu(), q = p.q();
    const SRange range = speed_range(p, r);
    if (r == Region::Center) {
        if (p.epsilon() == 1)
            return {2 * kPi / std::sqrt(mu * (1 - q)), 2 * kPi / ((1 - q) * std::sqrt(mu)), Monotone::Increasing,
                    range};
        return {2 * kPi / std::sqrt(-mu * (q - 1)), kInf, Monotone::Increasing, range};
    }
    const double linear = mu > 0 ? 2 * kPi / std::sqrt(mu) : kInf;
    switch (require_origin_case(p)) {
    case OriginCase::DefocusingSuper: return {linear, 0, Monotone::Decreasing, range};
    case OriginCase::FocusingSuper: return {linear, kInf, Monotone::Increasing, range};
    case OriginCase::DefocusingSub: return {0, linear, Monotone::Increasing, range};
    case OriginCase::DefocusingSubNeg: return {0, kInf, Monotone::Increasing, range};
    case OriginCase::FocusingSub:
        return {4 * kPi / ((1 - q) * std::sqrt(mu)), linear, Monotone::Decreasing, range};
    case OriginCase::DefocusingSuperNeg: return {kInf, 0, Monotone::Decreasing, range};
    }
    throw Error(Errc::WrongCase, "unreachable");
}

double period_origin_sine_route(const Params& p, double s)
{
    const double X = amplitude_from_speed(p, s);
    const double s2 = s * s;
    auto f = [&](double psi) {
        const double half = std::sin(psi / 2);
        const double delta = 2 * half * half;
        return X * std::sin(psi) * inv_sqrt_or_zero(origin_gap(p, X, s2, std::cos(psi), delta));
    };
    const quad::Result r = quad::gauss_legendre_adaptive(f, 0.0, kPi / 2, 1e-13, 40);
    return 4 * r.value;
}

double period_origin_direct(const Params& p, double s)
{
    const double X = amplitude_from_speed(p, s);
    const double s2 = s * s;
    const double slope = potential_slope(p, X);
    const double k = 2.0 * p.epsilon() / (p.q() + 1);
    // d = X - x is the integration variable, so the gap near the turning point
    // is formed from d directly
    auto f = [&](double d) {
        const double gap = d >= X / 2 ? s2 - potential(p, X - d)
                                      : p.mu() * d * (2 * X - d) - k * pow_diff(X, -d / X, p.q() + 1);
        return inv_sqrt_or_zero(gap) - 1 / std::sqrt(slope * d);
    };
    // the difference behaves like sqrt(d) at the turning point; d = X v^2 makes it smooth
    auto g = [&](double v) { return v == 0 ? 0.0 : 2 * X * v * f(X * v * v); };
    const quad::Result r = quad::gauss_legendre_adaptive(g, 0.0, 1.0, 1e-13, 40);
    return 4 * (r.value + 2 * std::sqrt(X / slope));
}

}  // namespace pseudoradial
