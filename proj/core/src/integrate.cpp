#include "pseudoradial/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pseudoradial/error.hpp"

namespace pseudoradial {

namespace {

/// Energy band around the singular level used to size the detection radius.
constexpr double kSingularEnergyBand = 1e-12;
constexpr double kMinSingularRadius = 1e-10;

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1. / 5, c3 = 3. / 10, c4 = 4. / 5, c5 = 8. / 9;
constexpr double a21 = 1. / 5;
constexpr double a31 = 3. / 40, a32 = 9. / 40;
constexpr double a41 = 44. / 45, a42 = -56. / 15, a43 = 32. / 9;
constexpr double a51 = 19372. / 6561, a52 = -25360. / 2187, a53 = 64448. / 6561, a54 = -212. / 729;
constexpr double a61 = 9017. / 3168, a62 = -355. / 33, a63 = 46732. / 5247, a64 = 49. / 176,
                 a65 = -5103. / 18656;
constexpr double b1 = 35. / 384, b3 = 500. / 1113, b4 = 125. / 192, b5 = -2187. / 6784, b6 = 11. / 84;
// difference between the 5th and embedded 4th order weights
constexpr double e1 = 71. / 57600, e3 = -71. / 16695, e4 = 71. / 1920, e5 = -17253. / 339200,
                 e6 = 22. / 525, e7 = -1. / 40;

struct Vec2 {
    double x, y;
};
Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

Vec2 field(const Params& p, Vec2 s) { return {s.y, restoring_force(p, s.x)}; }

/// Adaptive stepper with PI step-size control.  Keeps the last accepted
/// step so that states inside it can be recomputed by a shorter step.
class Stepper {
public:
    Stepper(const Params& p, Vec2 y0, double direction, const IntegratorOptions& opt)
        : p_(p), opt_(opt), dir_(direction), y_(y0), k1_(field(p, y0)), y_prev_(y0), k1_prev_(k1_)
    {
        const double d0 = norm(y_, y_), d1 = norm(k1_, y_);
        h_ = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h_ = std::min(h_, opt_.max_step);
    }

    double t() const { return t_; }
    double t_prev() const { return t_prev_; }
    Vec2 y() const { return y_; }
    Vec2 y_prev() const { return y_prev_; }
    long steps() const { return steps_; }

    /// One accepted step, never past t_limit (measured along the direction).
    void advance(double t_limit)
    {
        if (++steps_ > opt_.max_steps)
            throw Error(Errc::NotClosed, "step budget exhausted at t = " + std::to_string(t_));
        bool last_rejected = false;
        for (;;) {
            const double remaining = std::abs(t_limit - t_);
            bool clipped = false;
            double h = h_;
            if (h >= remaining) {
                h = remaining;
                clipped = true;
            }
            if (h < 1e-14 * std::max(1.0, std::abs(t_)))
                throw Error(Errc::StepSizeUnderflow, "step size underflow at t = " + std::to_string(t_));
            Vec2 k7{};
            double err = 0;
            const Vec2 ynew = trial(dir_ * h, y_, k1_, &k7, &err);
            if (!std::isfinite(ynew.x) || !std::isfinite(ynew.y) || !std::isfinite(err)) {
                h_ = h / 10;
                last_rejected = true;
                continue;
            }
            constexpr double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
            const double fac11 = std::pow(std::max(err, 1e-300), expo1);
            if (err <= 1) {
                double fac = fac11 / std::pow(err_old_, beta);
                fac = std::clamp(fac / safe, 0.1, 5.0);
                double hnew = h / fac;
                if (last_rejected) hnew = std::min(hnew, h);
                err_old_ = std::max(err, 1e-4);
                t_prev_ = t_;
                y_prev_ = y_;
                k1_prev_ = k1_;
                t_ = clipped ? t_limit : t_ + dir_ * h;
                y_ = ynew;
                k1_ = k7;
                if (!clipped || hnew < h_) h_ = std::min(hnew, opt_.max_step);
                return;
            }
            h_ = h / std::min(5.0, fac11 / safe);
            last_rejected = true;
        }
    }

    /// State at t_prev + dt, recomputed from the start of the last accepted step.
    Vec2 restep(double dt) const
    {
        if (dt == 0) return y_prev_;
        return trial(dt, y_prev_, k1_prev_, nullptr, nullptr);
    }

private:
    double norm(Vec2 e, Vec2 ref) const
    {
        const double sx = opt_.atol + opt_.rtol * std::abs(ref.x);
        const double sy = opt_.atol + opt_.rtol * std::abs(ref.y);
        return std::sqrt(0.5 * ((e.x / sx) * (e.x / sx) + (e.y / sy) * (e.y / sy)));
    }

    Vec2 trial(double h, Vec2 y, Vec2 k1, Vec2* k7_out, double* err_out) const
    {
        const Vec2 k2 = field(p_, y + (h * a21) * k1);
        const Vec2 k3 = field(p_, y + h * (a31 * k1 + a32 * k2));
        const Vec2 k4 = field(p_, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec2 k5 = field(p_, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec2 k6 = field(p_, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec2 ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        if (k7_out) {
            const Vec2 k7 = field(p_, ynew);
            *k7_out = k7;
            const Vec2 e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double sx = opt_.atol + opt_.rtol * std::max(std::abs(y.x), std::abs(ynew.x));
            const double sy = opt_.atol + opt_.rtol * std::max(std::abs(y.y), std::abs(ynew.y));
            *err_out = std::sqrt(0.5 * ((e.x / sx) * (e.x / sx) + (e.y / sy) * (e.y / sy)));
        }
        return ynew;
    }

    const Params& p_;
    IntegratorOptions opt_;
    double dir_;
    double t_ = 0, t_prev_ = 0;
    Vec2 y_, k1_, y_prev_, k1_prev_;
    double h_;
    double err_old_ = 1e-4;
    long steps_ = 0;
};

PhasePoint to_point(Vec2 v) { return {v.x, v.y}; }

/// Offset dt in the last step where g changes sign, found by bisection on
/// recomputed states.  g_start and g_end must have opposite signs (or g_end == 0).
template <class G>
double locate(const Stepper& st, G&& g, double g_start, double tol_t)
{
    double a = 0, b = st.t() - st.t_prev();
    double ga = g_start;
    while (std::abs(b - a) > tol_t) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double gm = g(st.restep(m));
        if ((ga < 0) == (gm < 0) && gm != 0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

/// Raises SingularOriginReached if the last step entered the detection ball,
/// either at its end point or at an axis crossing inside it.
void check_singular(const Params& p, const Stepper& st, double radius)
{
    const Vec2 y1 = st.y(), y0 = st.y_prev();
    auto hit = [&](Vec2 s) { return quasi_radius(p, to_point(s)) <= radius; };
    bool reached = hit(y1);
    if (!reached && (y0.x < 0) != (y1.x < 0) && y0.x != 0) {
        const double dt = locate(st, [](Vec2 s) { return s.x; }, y0.x, 1e-15 * std::max(1.0, std::abs(st.t())));
        reached = hit(st.restep(dt));
    }
    if (!reached && (y0.y < 0) != (y1.y < 0) && y0.y != 0) {
        const double dt = locate(st, [](Vec2 s) { return s.y; }, y0.y, 1e-15 * std::max(1.0, std::abs(st.t())));
        reached = hit(st.restep(dt));
    }
    if (reached)
        throw Error(Errc::SingularOriginReached,
                    "orbit entered the singular neighbourhood of the origin at t = " + std::to_string(st.t()));
}

bool singular_active(const Params& p, const IntegratorOptions& opt)
{
    return opt.detect_singular_origin && p.sublinear();
}

void check_start(const Params& p, PhasePoint s0)
{
    if (!std::isfinite(s0.x) || !std::isfinite(s0.y))
        throw Error(Errc::InvalidArgument, "initial state must be finite");
    if (p.sublinear() && s0.x == 0 && s0.y == 0)
        throw Error(Errc::SingularOriginReached, "cannot start at the singular origin");
}

IntegratorOptions oracle_options(PhasePoint s0, double tol)
{
    IntegratorOptions opt;
    opt.rtol = tol;
    opt.atol = tol * std::max({std::abs(s0.x), std::abs(s0.y), 1e-300});
    return opt;
}

double sign_of(double v) { return v < 0 ? -1.0 : 1.0; }

}  // namespace

double singular_radius(const Params& p) noexcept
{
    return std::max(kMinSingularRadius, std::pow((p.q() + 1) / 2 * kSingularEnergyBand, 1 / (p.q() + 1)));
}

double quasi_radius(const Params& p, PhasePoint s) noexcept
{
    return std::max(std::abs(s.x), std::pow((p.q() + 1) / 2 * s.y * s.y, 1 / (p.q() + 1)));
}

double energy_drift(const Params& p, const Trajectory& traj)
{
    if (traj.samples.empty()) return 0;
    const double e0 = energy(p, traj.samples.front().state);
    double drift = 0;
    for (const auto& s : traj.samples) drift = std::max(drift, std::abs(energy(p, s.state) - e0));
    return drift;
}

Trajectory integrate(const Params& p, PhasePoint s0, double t_max, double tol)
{
    if (!(t_max > 0) || !std::isfinite(t_max)) throw Error(Errc::InvalidArgument, "t_max must be positive");
    if (!(tol >= 1e-14 && tol <= 1e-4)) throw Error(Errc::InvalidArgument, "tol must lie in [1e-14, 1e-4]");
    check_start(p, s0);
    IntegratorOptions opt;
    opt.rtol = opt.atol = tol;
    Stepper st(p, {s0.x, s0.y}, 1.0, opt);
    const bool singular = singular_active(p, opt);
    const double radius = singular_radius(p);
    Trajectory traj;
    traj.samples.push_back({0, s0});
    while (st.t() < t_max) {
        st.advance(t_max);
        if (singular) check_singular(p, st, radius);
        traj.samples.push_back({st.t(), to_point(st.y())});
    }
    return traj;
}

Trajectory integrate_at(const Params& p, PhasePoint s0, std::span<const double> times,
                        const IntegratorOptions& opt)
{
    check_start(p, s0);
    if (times.empty()) return {{{0, s0}}};
    const double dir = sign_of(times.front());
    double prev = 0;
    for (double t : times) {
        if (!std::isfinite(t) || (t - prev) * dir <= 0)
            throw Error(Errc::InvalidArgument, "output times must be strictly monotone and of one sign");
        prev = t;
    }
    Stepper st(p, {s0.x, s0.y}, dir, opt);
    const bool singular = singular_active(p, opt);
    const double radius = singular_radius(p);
    Trajectory traj;
    traj.samples.reserve(times.size() + 1);
    traj.samples.push_back({0, s0});
    for (double t : times) {
        while (st.t() != t) {
            st.advance(t);
            if (singular) check_singular(p, st, radius);
        }
        traj.samples.push_back({t, to_point(st.y())});
    }
    return traj;
}

double period_oracle(const Params& p, PhasePoint s0, double tol)
{
    check_start(p, s0);
    if (!(tol > 0)) throw Error(Errc::InvalidArgument, "tol must be positive");
    const double force = restoring_force(p, s0.x);
    if (s0.y == 0 && force == 0) throw Error(Errc::NotClosed, "launch point is an equilibrium");

    // crossing function and the direction in which it crosses zero at the launch point
    const bool use_x = s0.y != 0;
    const double dir = use_x ? sign_of(s0.y) : sign_of(force);
    auto g = [&](Vec2 s) { return use_x ? s.x - s0.x : s.y; };

    const IntegratorOptions opt = oracle_options(s0, tol);
    Stepper st(p, {s0.x, s0.y}, 1.0, opt);
    const bool singular = singular_active(p, opt);
    const double radius = singular_radius(p);
    double g_prev = 0;
    try {
        for (;;) {
            st.advance(std::numeric_limits<double>::infinity());
            if (singular) check_singular(p, st, radius);
            const double g_now = g(st.y());
            if (dir * g_prev < 0 && dir * g_now >= 0)
                return st.t_prev() + locate(st, g, g_prev, tol);
            g_prev = g_now;
        }
    } catch (const Error& e) {
        if (e.code() == Errc::StepSizeUnderflow) throw Error(Errc::NotClosed, e.what());
        throw;
    }
}

double quarter_period_oracle(const Params& p, double s, double tol)
{
    if (!(s > 0)) throw Error(Errc::InvalidArgument, "launch speed must be positive");
    const PhasePoint s0{0, s};
    const IntegratorOptions opt = oracle_options(s0, tol);
    Stepper st(p, {0, s}, 1.0, opt);
    const bool singular = singular_active(p, opt);
    const double radius = singular_radius(p);
    try {
        for (;;) {
            const double y_prev = st.y().y;
            st.advance(std::numeric_limits<double>::infinity());
            if (singular) check_singular(p, st, radius);
            if (st.y().y <= 0) {
                return 4 * (st.t_prev() + locate(st, [](Vec2 v) { return v.y; }, y_prev, tol));
            }
        }
    } catch (const Error& e) {
        if (e.code() == Errc::StepSizeUnderflow) throw Error(Errc::NotClosed, e.what());
        throw;
    }
}

std::vector<double> axis_crossing_times(const Params& p, PhasePoint s0, double tol)
{
    const double period = period_oracle(p, s0, tol);
    const double t_end = period * (1 - 1e-6);
    const IntegratorOptions opt = oracle_options(s0, tol);
    Stepper st(p, {s0.x, s0.y}, 1.0, opt);
    std::vector<double> out;
    while (st.t() < t_end) {
        st.advance(t_end);
        const Vec2 a = st.y_prev(), b = st.y();
        if (a.x != 0 && (a.x < 0 ? b.x >= 0 : b.x <= 0))
            out.push_back(st.t_prev() + locate(st, [](Vec2 v) { return v.x; }, a.x, tol));
        if (a.y != 0 && (a.y < 0 ? b.y >= 0 : b.y <= 0))
            out.push_back(st.t_prev() + locate(st, [](Vec2 v) { return v.y; }, a.y, tol));
    }
    std::sort(out.begin(), out.end());
    return out;
}

double homoclinic_frequency(const Params& p)
{
    if (!(p.epsilon() == 1 && p.sublinear() && p.mu() > 0))
        throw Error(Errc::WrongCase, "homoclinic loops need eps = +1, q < 1, mu > 0");
    return (1 - p.q()) * std::sqrt(p.mu()) / 2;
}

double homoclinic_period(const Params& p)
{
    return std::numbers::pi / homoclinic_frequency(p);
}

PhasePoint homoclinic_state(const Params& p, double t)
{
    const double omega = homoclinic_frequency(p);
    const double apex = homoclinic_apex(p);
    const double m = 2 / (1 - p.q());
    const double s = std::sin(omega * t), c = std::cos(omega * t);
    const double as = std::abs(s);
    return {apex * std::pow(as, m), apex * m * signed_pow(s, m - 1) * c * omega};
}

Trajectory homoclinic_time_param(const Params& p, int n)
{
    if (n < 2) throw Error(Errc::InvalidArgument, "need at least two samples");
    const double period = homoclinic_period(p);
    Trajectory traj;
    traj.samples.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double t = i == n - 1 ? period : period * i / (n - 1);
        traj.samples.push_back({t, homoclinic_state(p, t)});
    }
    return traj;
}

SplicedHomoclinic homoclinic_spliced(const Params& p, double switch_ratio, double tol)
{
    if (!(switch_ratio > 0 && switch_ratio < 1))
        throw Error(Errc::InvalidArgument, "switch ratio must lie in (0, 1)");
    homoclinic_frequency(p);  // case check
    const double apex = homoclinic_apex(p);
    const double q = p.q(), mu = p.mu();
    const double x_switch = switch_ratio * apex;

    IntegratorOptions opt;
    opt.rtol = tol;
    opt.atol = tol * x_switch;
    opt.detect_singular_origin = false;
    Stepper st(p, {apex, 0}, 1.0, opt);
    auto g = [&](Vec2 s) { return s.x - x_switch; };
    double t_switch = 0;
    for (;;) {
        const double g_prev = g(st.y());
        st.advance(std::numeric_limits<double>::infinity());
        if (g(st.y()) <= 0) {
            t_switch = st.t_prev() + locate(st, g, g_prev, tol);
            break;
        }
        if (st.y().y >= 0)
            throw Error(Errc::NotClosed, "orbit turned before reaching the switch point; switch ratio too small");
    }

    // near the origin w = kappa tau^m (1 + beta tau^2 + ...), tau = time to the origin
    const double m = 2 / (1 - q);
    const double kappa = std::pow((1 - q) * (1 - q) / (2 * (1 + q)), 1 / (1 - q));
    const double beta = -mu / (6 * m);
    double tau = std::pow(x_switch / kappa, 1 / m);
    for (int it = 0; it < 50; ++it) {
        const double f = kappa * std::pow(tau, m) * (1 + beta * tau * tau) - x_switch;
        const double df = kappa * std::pow(tau, m - 1) * (m + (m + 2) * beta * tau * tau);
        const double step = f / df;
        tau -= step;
        if (std::abs(step) <= 1e-16 * tau) break;
    }
    if (!std::isfinite(tau) || !(tau > 0))
        throw Error(Errc::NotClosed, "local expansion does not reach the switch point; switch ratio too large");
    return {2 * (t_switch + tau), t_switch, tau};
}

}  // namespace pseudoradial
