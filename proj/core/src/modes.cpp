#include "pseudoradial/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pseudoradial/error.hpp"
#include "pseudoradial/integrate.hpp"

namespace pseudoradial {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
/// Accepted |T(s*) - 2pi/k| for a launch speed.
constexpr double kPeriodMatch = 1e-10;
/// Relative distance below which a real number is taken to be an integer.
constexpr double kIntegerSnap = 1e-12;

std::optional<long> near_integer(double v)
{
    const double r = std::round(v);
    if (std::abs(v - r) <= kIntegerSnap * std::max(1.0, std::abs(v))) return static_cast<long>(r);
    return std::nullopt;
}

double wrap_angle(double theta)
{
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    return t;
}

std::string kind_name(ModeKind kind)
{
    switch (kind) {
    case ModeKind::SignChanging: return "sign-changing";
    case ModeKind::Positive: return "positive";
    case ModeKind::Nonnegative: return "nonnegative";
    case ModeKind::Constant: return "constant";
    }
    return "?";
}

/// Brent's method on an increasing-or-decreasing f with f(a), f(b) of opposite sign.
template <class F>
double brent(F&& f, double a, double b, double fa, double fb, double ftol)
{
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < 300; ++it) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2 * std::numeric_limits<double>::epsilon() * std::abs(b) + 1e-300;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || std::abs(fb) <= ftol) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2 * xm * s;
                q = 1 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2 * xm * qq * (qq - r) - (b - a) * (r - 1));
                q = (qq - 1) * (r - 1) * (s - 1);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2 * p < std::min(3 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
        fb = f(b);
    }
    return b;
}

/// Storage grid size; about 256 points per period, never fewer than 4096.
int storage_size(int k) { return std::max(4096, 256 * k); }

std::vector<ModeSample> integrate_samples(const Params& p, PhasePoint launch, int n, double scale, double* closure)
{
    std::vector<double> times(n);
    for (int i = 0; i < n; ++i) times[i] = kTwoPi * (i + 1) / n;
    IntegratorOptions opt;
    opt.rtol = 1e-13;
    opt.atol = 1e-13 * scale;
    const Trajectory traj = integrate_at(p, launch, times, opt);
    std::vector<ModeSample> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const auto& s = traj.samples[i];
        out.push_back({i == 0 ? 0.0 : s.t, s.state.x, s.state.y});
    }
    const PhasePoint end = traj.samples.back().state;
    *closure = std::hypot(end.x - launch.x, end.y - launch.y);
    return out;
}

}  // namespace

ModeSet ModeSet::finite(std::vector<int> values)
{
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    ModeSet s;
    s.values_ = std::move(values);
    return s;
}

ModeSet ModeSet::all_from(int first)
{
    ModeSet s;
    s.from_ = std::max(1, first);
    return s;
}

bool ModeSet::contains(int k) const noexcept
{
    if (from_ && k >= *from_) return true;
    return std::binary_search(values_.begin(), values_.end(), k);
}

std::vector<int> ModeSet::materialize(int cap) const
{
    std::vector<int> out;
    for (int v : values_)
        if (v <= cap) out.push_back(v);
    if (from_)
        for (int k = *from_; k <= cap; ++k) out.push_back(k);
    return out;
}

ModeSet intersect(const ModeSet& a, const ModeSet& b)
{
    ModeSet out;
    if (a.from_ && b.from_) out.from_ = std::max(*a.from_, *b.from_);
    // explicit values below the common tail, from either side
    const int below = out.from_ ? *out.from_ - 1 : std::numeric_limits<int>::max();
    for (const ModeSet* s : {&a, &b})
        for (int v : s->values_)
            if (v <= below && a.contains(v) && b.contains(v)) out.values_.push_back(v);
    if (a.from_ && b.from_) {
        const int lo = std::min(*a.from_, *b.from_);
        for (int v = lo; v <= below; ++v)
            if (a.contains(v) && b.contains(v)) out.values_.push_back(v);
    }
    std::sort(out.values_.begin(), out.values_.end());
    out.values_.erase(std::unique(out.values_.begin(), out.values_.end()), out.values_.end());
    return out;
}

ModeSet integers_between(double lo, double hi)
{
    long first;
    if (auto n = near_integer(lo))
        first = *n + 1;
    else
        first = static_cast<long>(std::floor(lo)) + 1;
    first = std::max(first, 1L);
    if (hi == kInf) return ModeSet::all_from(static_cast<int>(first));
    long last;
    if (auto n = near_integer(hi))
        last = *n - 1;
    else
        last = static_cast<long>(std::ceil(hi)) - 1;
    std::vector<int> values;
    for (long k = first; k <= last; ++k) values.push_back(static_cast<int>(k));
    return ModeSet::finite(std::move(values));
}

CaseClassification classify_case(const Params& p)
{
    const double mu = p.mu(), q = p.q();
    CaseClassification c;
    if (p.epsilon() == 1) {
        if (!(mu > 0)) return c;
        const double root = std::sqrt(mu);
        if (!p.sublinear()) {
            c.sign_changing = integers_between(0, root);
            return c;
        }
        c.sign_changing = integers_between((1 - q) * root / 2, root);
        c.positive = integers_between((1 - q) * root, std::sqrt(mu * (1 - q)));
        if (auto n = near_integer((1 - q) * root); n && *n >= 1) c.nonnegative = static_cast<int>(*n);
        return c;
    }
    if (mu >= 0) {
        c.sign_changing = integers_between(std::sqrt(mu), kInf);
        return c;
    }
    c.sign_changing = ModeSet::all_from(1);
    if (!p.sublinear()) c.positive = integers_between(1, std::sqrt(-mu * (q - 1)));
    return c;
}

double find_launch_speed(const Params& p, Region region, double target,
                         std::optional<std::pair<double, double>> bracket)
{
    if (!(target > 0) || !std::isfinite(target)) throw Error(Errc::InvalidArgument, "target period must be positive");
    const PeriodLimits limits = period_limits(p, region);
    const double sign = limits.monotone == Monotone::Increasing ? 1.0 : -1.0;
    // g < 0 on the inner side of the root, > 0 on the outer side
    auto g = [&](double s) { return sign * (period(p, region, s) - target); };

    const double gamma = limits.s_range.hi;
    const bool bounded = limits.s_range.bounded();
    double lo, hi, glo, ghi;
    if (bracket) {
        lo = bracket->first;
        hi = bracket->second;
        if (!(lo > 0 && hi > lo)) throw Error(Errc::InvalidArgument, "bracket must satisfy 0 < lo < hi");
        glo = g(lo);
        ghi = g(hi);
        if (glo > 0 || ghi < 0) throw Error(Errc::BracketFailure, "supplied bracket does not enclose the root");
    } else {
        const double ref = bounded ? gamma / 2 : 1.0;
        lo = ref;
        glo = g(lo);
        for (int j = 1; glo > 0 && j <= 60; ++j) {
            lo = ref * std::pow(10.0, -j);
            glo = g(lo);
        }
        hi = ref;
        ghi = glo;
        for (int j = 1; ghi < 0 && j <= (bounded ? 11 : 60); ++j) {
            hi = bounded ? gamma * (1 - 0.5 * std::pow(10.0, -j)) : ref * std::pow(10.0, j);
            ghi = g(hi);
        }
        if (glo > 0 || ghi < 0)
            throw Error(Errc::BracketFailure, "could not bracket launch speed for period " + std::to_string(target));
        if (glo == 0) return lo;
        if (ghi == 0) return hi;
        // tighten the lower end next to hi so the root finder starts from adjacent decades
        if (hi / lo > 10) {
            const double cand = bounded ? lo : hi / 10;
            if (cand > lo) {
                const double gc = g(cand);
                if (gc <= 0) {
                    lo = cand;
                    glo = gc;
                }
            }
        }
    }

    double s_star;
    if (bounded) {
        s_star = brent(g, lo, hi, glo, ghi, 1e-12);
    } else {
        auto gl = [&](double sigma) { return g(std::exp(sigma)); };
        s_star = std::exp(brent(gl, std::log(lo), std::log(hi), glo, ghi, 1e-12));
    }
    const double miss = std::abs(period(p, region, s_star) - target);
    if (!(miss <= kPeriodMatch))
        throw Error(Errc::BracketFailure, "launch speed misses the target period by " + std::to_string(miss));
    return s_star;
}

ModeSolution solve_mode(const Params& p, int k, ModeKind kind)
{
    if (kind == ModeKind::Constant) throw Error(Errc::InvalidArgument, "use constant_mode for k = 0");
    if (k < 1) throw Error(Errc::InvalidArgument, "k must be a positive integer");
    const CaseClassification cls = classify_case(p);
    const double target = kTwoPi / k;
    auto refuse = [&] {
        return Error(Errc::NoSuchMode, "no " + kind_name(kind) + " solution with k = " + std::to_string(k) +
                                           " for these parameters");
    };

    ModeSolution m{p, k, kind, {}, 0, target, 0, {}};
    if (kind == ModeKind::Nonnegative) {
        if (cls.nonnegative != k) throw refuse();
        // closed form: w = x_* |sin(k theta / 2)|^{2/(1-q)}
        const int n = storage_size(k);
        m.samples.reserve(n);
        for (int i = 0; i < n; ++i) {
            const double theta = kTwoPi * i / n;
            const PhasePoint s = homoclinic_state(p, theta);
            m.samples.push_back({theta, s.x, s.y});
        }
        m.launch = {m.samples[0].w, m.samples[0].dw};
        m.period = homoclinic_period(p);
        const PhasePoint end = homoclinic_state(p, kTwoPi);
        m.closure_error = std::hypot(end.x - m.launch.x, end.y - m.launch.y);
        return m;
    }

    double scale;
    if (kind == ModeKind::SignChanging) {
        if (!cls.sign_changing.contains(k)) throw refuse();
        m.launch_speed = find_launch_speed(p, Region::Origin, target);
        m.launch = {0, m.launch_speed};
        scale = std::max(m.launch_speed, amplitude_from_speed(p, m.launch_speed));
    } else {
        if (!cls.positive.contains(k)) throw refuse();
        m.launch_speed = find_launch_speed(p, Region::Center, target);
        const TurningPoints tp = turning_points(p, m.launch_speed);
        m.launch = {tp.inner, 0};
        scale = tp.outer;
    }
    m.samples = integrate_samples(p, m.launch, storage_size(k), scale, &m.closure_error);
    return m;
}

ModeSolution constant_mode(const Params& p, double value)
{
    const bool equilibrium =
        value == 0 || (has_off_origin_equilibria(p) &&
                       std::abs(std::abs(value) - equilibrium_abscissa(p)) <= 1e-12 * equilibrium_abscissa(p));
    if (!equilibrium) throw Error(Errc::InvalidArgument, "constant solutions are 0 and +-c only");
    ModeSolution m{p, 0, ModeKind::Constant, {value, 0}, 0, 0, 0, {}};
    const int n = 64;
    for (int i = 0; i < n; ++i) m.samples.push_back({kTwoPi * i / n, value, 0});
    return m;
}

double evaluate_w(const ModeSolution& m, double theta)
{
    if (m.kind == ModeKind::Constant) return m.launch.x;
    // touching modes start at a zero of the closed form, which interpolation can undershoot
    if (m.kind == ModeKind::Nonnegative) return homoclinic_state(m.params, theta).x;
    const std::size_t n = m.samples.size();
    const double h = kTwoPi / n;
    const double t = wrap_angle(theta);
    std::size_t i = std::min(static_cast<std::size_t>(t / h), n - 1);
    double u = (t - h * i) / h;
    if (u < 0) u = 0;
    const ModeSample& a = m.samples[i];
    const ModeSample& b = m.samples[(i + 1) % n];
    if (u == 0) return a.w;
    const double a2 = restoring_force(m.params, a.w), b2 = restoring_force(m.params, b.w);
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    const double h0 = 1 - 10 * u3 + 15 * u4 - 6 * u5;
    const double h1 = u - 6 * u3 + 8 * u4 - 3 * u5;
    const double h2 = 0.5 * (u2 - 3 * u3 + 3 * u4 - u5);
    const double h3 = 0.5 * (u3 - 2 * u4 + u5);
    const double h4 = -4 * u3 + 7 * u4 - 3 * u5;
    const double h5 = 10 * u3 - 15 * u4 + 6 * u5;
    return h0 * a.w + h1 * h * a.dw + h2 * h * h * a2 + h3 * h * h * b2 + h4 * h * b.dw + h5 * b.w;
}

std::vector<ThetaSample> sample_w(const ModeSolution& m, int n)
{
    if (n < std::max(1, 4 * m.k)) throw Error(Errc::InvalidArgument, "need at least 4k samples");
    std::vector<ThetaSample> out;
    out.reserve(n + 1);
    for (int i = 0; i < n; ++i) {
        const double theta = kTwoPi * i / n;
        out.push_back({theta, evaluate_w(m, theta)});
    }
    out.push_back({kTwoPi, out.front().w});
    return out;
}

std::vector<double> ode_residual_field(const Params& p, std::span<const ThetaSample> samples)
{
    if (samples.size() < 64) throw Error(Errc::InvalidArgument, "need at least 64 samples");
    const double h = samples[1].theta - samples[0].theta;
    if (!(h > 0)) throw Error(Errc::InvalidArgument, "samples must be increasing in theta");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (std::abs(samples[i].theta - samples[i - 1].theta - h) > 1e-9 * h)
            throw Error(Errc::InvalidArgument, "samples must be uniformly spaced");
    const bool periodic = std::abs(samples.back().theta - samples.front().theta - kTwoPi) <= 1e-9;
    const std::size_t n = periodic ? samples.size() - 1 : samples.size();
    std::vector<double> out(samples.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < n; ++i) {
        if (!periodic && (i == 0 || i + 1 == n)) continue;
        const double wi = samples[i].w;
        const double wm = samples[i == 0 ? n - 1 : i - 1].w, wp = samples[i + 1 == n ? 0 : i + 1].w;
        out[i] = (wp - 2 * wi + wm) / (h * h) - restoring_force(p, wi);
    }
    return out;
}

double ode_residual(const Params& p, std::span<const ThetaSample> samples, double exclude_below)
{
    const std::vector<double> field = ode_residual_field(p, samples);
    double worst = 0;
    for (std::size_t i = 0; i < field.size(); ++i)
        if (!std::isnan(field[i]) && std::abs(samples[i].w) >= exclude_below)
            worst = std::max(worst, std::abs(field[i]));
    return worst;
}

int count_sign_changes(std::span<const ThetaSample> samples)
{
    if (samples.size() < 2) return 0;
    std::size_t n = samples.size();
    if (std::abs(samples.back().theta - samples.front().theta - kTwoPi) <= 1e-9) --n;
    int changes = 0;
    for (std::size_t i = 0; i < n; ++i)
        if ((samples[i].w < 0) != (samples[(i + 1) % n].w < 0)) ++changes;
    return changes;
}

int count_touch_zeros(std::span<const ThetaSample> samples, double threshold)
{
    if (samples.empty()) return 0;
    std::size_t n = samples.size();
    if (n > 1 && std::abs(samples.back().theta - samples.front().theta - kTwoPi) <= 1e-9) --n;
    auto near = [&](std::size_t i) { return std::abs(samples[i % n].w) <= threshold; };
    int runs = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (near(i) && !near(i + n - 1)) ++runs;
    if (runs == 0 && near(0)) runs = 1;  // everything near zero
    return runs;
}

}  // namespace pseudoradial
