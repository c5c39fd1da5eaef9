#include "pseudoradial/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pseudoradial/error.hpp"

namespace pseudoradial {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
/// Grids must stay this far (relative) from zeros of the core.
constexpr double kCoreZeroMargin = 1e-3;

bool uses_alpha(Family f)
{
    return f != Family::ConformalLog && f != Family::CylinderLinear && f != Family::Spherical &&
           f != Family::Hyperbolic;
}

bool is_conformal(Family f)
{
    return f == Family::ConformalPower || f == Family::ConformalLog || f == Family::ConformalOscillatory;
}

void check_q(double q)
{
    if (!std::isfinite(q) || !(q > 0) || q == 1) throw Error(Errc::InvalidArgument, "q must be positive and not 1");
}

/// {x : P x^2 + Q > 0, x > 0} mapped back through x = exp(scale * r) (or x = r^scale).
PositivityDomain two_exponential_domain(double P, double Q, Interval whole, auto&& to_r)
{
    if (P >= 0 && Q >= 0 && (P > 0 || Q > 0)) return PositivityDomain::from_intervals({whole});
    if (P <= 0 && Q <= 0) return PositivityDomain::from_intervals({});
    const double x2 = -Q / P;  // crossing at x^2 = x2
    const double r0 = to_r(std::sqrt(x2));
    if (P > 0) return PositivityDomain::from_intervals({{r0, whole.hi}});
    return PositivityDomain::from_intervals({{whole.lo, r0}});
}

PositivityDomain make_domain(Family f, double alpha, Coefficients c)
{
    const double M = c.first, N = c.second;
    switch (f) {
    case Family::ConformalPower:
        // M r^a + N r^-a > 0  <=>  M x^2 + N > 0 with x = r^a
        return two_exponential_domain(M, N, {0, kInf}, [&](double x) { return std::pow(x, 1 / alpha); });
    case Family::CylinderHyperbolic:
        // A cosh + B sinh = ((A+B) x^2 + (A-B)) / (2x), x = e^{alpha r}
        return two_exponential_domain((M + N) / 2, (M - N) / 2, {-kInf, kInf},
                                      [&](double x) { return std::log(x) / alpha; });
    case Family::ConformalLog:
        if (N == 0) return PositivityDomain::from_intervals(M > 0 ? std::vector<Interval>{{0, kInf}} : std::vector<Interval>{});
        if (N > 0) return PositivityDomain::from_intervals({{std::exp(-M / N), kInf}});
        return PositivityDomain::from_intervals({{0, std::exp(-M / N)}});
    case Family::CylinderLinear:
        if (N == 0)
            return PositivityDomain::from_intervals(M > 0 ? std::vector<Interval>{{-kInf, kInf}} : std::vector<Interval>{});
        if (N > 0) return PositivityDomain::from_intervals({{-M / N, kInf}});
        return PositivityDomain::from_intervals({{-kInf, -M / N}});
    case Family::ConformalOscillatory:
    case Family::CylinderTrigonometric: {
        if (M == 0 && N == 0) return PositivityDomain::from_intervals({});
        const bool log_var = f == Family::ConformalOscillatory;
        return PositivityDomain::periodic(alpha, std::atan2(N, M), log_var,
                                          log_var ? Interval{0, kInf} : Interval{-kInf, kInf});
    }
    case Family::Spherical: return PositivityDomain::from_intervals({{0, kPi}});
    case Family::Hyperbolic: return PositivityDomain::from_intervals({{0, kInf}});
    }
    return {};
}

/// Derivatives by central differences when the analytic ones are absent.
double diff1(const std::function<double(double)>& f, double r)
{
    const double h = 1e-5 * std::max(1.0, std::abs(r));
    return (f(r + h) - f(r - h)) / (2 * h);
}

double diff2(const std::function<double(double)>& f, double r)
{
    const double h = 1e-4 * std::max(1.0, std::abs(r));
    return (f(r + h) - 2 * f(r) + f(r - h)) / (h * h);
}

/// Derivatives of b/a through the metric's own derivative functions.
struct MetricEval {
    double a, b, da, db, d2b;
};

MetricEval eval_metric(const MetricSpec& m, double r)
{
    MetricEval e{m.a(r), m.b(r), 0, 0, 0};
    e.da = m.da ? m.da(r) : diff1(m.a, r);
    e.db = m.db ? m.db(r) : diff1(m.b, r);
    e.d2b = m.d2b ? m.d2b(r) : diff2(m.b, r);
    return e;
}

CaseClassification printed_sets(Family f, int eps, double q, double alpha)
{
    CaseClassification c;
    switch (f) {
    case Family::ConformalPower:
    case Family::CylinderHyperbolic:
        if (eps == 1 && alpha <= 1) return c;  // radial only
        if (eps == -1) {
            c.sign_changing = integers_between(alpha, kInf);
        } else if (q > 1) {
            c.sign_changing = ModeSet::all_from(1);
        } else {
            c.sign_changing = integers_between(alpha * (1 - q) / 2, alpha);
            c.positive = integers_between(alpha * (1 - q), alpha * std::sqrt(1 - q));
        }
        if (eps == 1 && q < 1) {
            const double n = (1 - q) * alpha, r = std::round(n);
            if (r >= 1 && std::abs(n - r) <= 1e-12 * std::max(1.0, n)) c.nonnegative = static_cast<int>(r);
        }
        return c;
    case Family::ConformalLog:
    case Family::CylinderLinear:
        if (eps == -1) c.sign_changing = ModeSet::all_from(1);
        return c;
    case Family::ConformalOscillatory:
    case Family::CylinderTrigonometric:
        if (eps == 1) return c;
        c.sign_changing = ModeSet::all_from(1);
        if (q > 1 && alpha * std::sqrt(q - 1) > 2) c.positive = integers_between(1, alpha * std::sqrt(q - 1));
        return c;
    case Family::Spherical:
    case Family::Hyperbolic:
        if (eps == -1) c.sign_changing = ModeSet::all_from(2);
        return c;
    }
    return c;
}

bool same_up_to(const ModeSet& a, const ModeSet& b, int cap)
{
    return a.materialize(cap) == b.materialize(cap) && a.unbounded() == b.unbounded();
}

}  // namespace

std::string_view to_string(Family f) noexcept
{
    switch (f) {
    case Family::ConformalPower: return "conformal-power";
    case Family::ConformalLog: return "conformal-log";
    case Family::ConformalOscillatory: return "conformal-oscillatory";
    case Family::CylinderHyperbolic: return "cylinder-hyperbolic";
    case Family::CylinderLinear: return "cylinder-linear";
    case Family::CylinderTrigonometric: return "cylinder-trigonometric";
    case Family::Spherical: return "spherical";
    case Family::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

std::optional<Family> parse_family(std::string_view name) noexcept
{
    for (Family f : kAllFamilies)
        if (to_string(f) == name) return f;
    return std::nullopt;
}

MetricSpec euclidean_metric()
{
    return {[](double) { return 1.0; }, [](double r) { return r; }, [](double) { return 0.0; },
            [](double) { return 1.0; }, [](double) { return 0.0; }, {0, kInf}};
}

double metric_condition_residual(const MetricSpec& m, double q, double mu, std::span<const double> r_grid)
{
    check_q(q);
    const double expo = 2 / (1 - q);
    const double target = mu * (1 - q) / 2;
    double worst = 0;
    for (double r : r_grid) {
        if (!(r > m.r_interval.lo && r < m.r_interval.hi))
            throw Error(Errc::DomainViolation, "grid point " + std::to_string(r) + " outside the metric's interval");
        const MetricEval e = eval_metric(m, r);
        if (!(e.a > 0) || !(e.b > 0))
            throw Error(Errc::DomainViolation, "metric not positive at r = " + std::to_string(r));
        // (b^expo b'/a)' / (a b^{expo-1})
        const double lhs = (-e.da * e.b * e.db / e.a + expo * e.db * e.db + e.b * e.d2b) / (e.a * e.a);
        worst = std::max(worst, std::abs(lhs - target));
    }
    return worst;
}

double admissible_mu(Family f, double q, double alpha)
{
    check_q(q);
    if (uses_alpha(f) && (!std::isfinite(alpha) || !(alpha > 0)))
        throw Error(Errc::InvalidArgument, "alpha must be positive");
    switch (f) {
    case Family::ConformalPower:
    case Family::CylinderHyperbolic: return alpha * alpha;
    case Family::ConformalLog:
    case Family::CylinderLinear: return 0;
    case Family::ConformalOscillatory:
    case Family::CylinderTrigonometric: return -alpha * alpha;
    case Family::Spherical:
    case Family::Hyperbolic:
        if (std::abs(q - 3) > 1e-12)
            throw Error(Errc::IncompatibleExponent, std::string(to_string(f)) + " metric separates only for q = 3");
        return 1;
    }
    return 0;
}

PositivityDomain PositivityDomain::from_intervals(std::vector<Interval> intervals)
{
    PositivityDomain d;
    for (auto iv : intervals)
        if (iv.hi > iv.lo) d.intervals_.push_back(iv);
    std::sort(d.intervals_.begin(), d.intervals_.end(), [](Interval a, Interval b) { return a.lo < b.lo; });
    return d;
}

PositivityDomain PositivityDomain::periodic(double alpha, double phase, bool log_variable, Interval outer)
{
    PositivityDomain d;
    d.periodic_ = true;
    d.alpha_ = alpha;
    d.phase_ = phase;
    d.log_ = log_variable;
    d.outer_ = outer;
    return d;
}

bool PositivityDomain::empty() const noexcept { return !periodic_ && intervals_.empty(); }

std::optional<Interval> PositivityDomain::component(double r) const noexcept
{
    if (!periodic_) {
        for (auto iv : intervals_)
            if (r > iv.lo && r < iv.hi) return iv;
        return std::nullopt;
    }
    if (!(r > outer_.lo && r < outer_.hi)) return std::nullopt;
    const double v = log_ ? std::log(r) : r;
    const double t = alpha_ * v - phase_;
    const double j = std::floor((t + kPi / 2) / (2 * kPi));
    const double start = -kPi / 2 + 2 * kPi * j;
    if (!(t > start && t < start + kPi)) return std::nullopt;
    double lo = (start + phase_) / alpha_, hi = (start + kPi + phase_) / alpha_;
    if (log_) {
        lo = std::exp(lo);
        hi = std::exp(hi);
    }
    return Interval{std::max(lo, outer_.lo), std::min(hi, outer_.hi)};
}

bool PositivityDomain::contains(double r) const noexcept { return component(r).has_value(); }

std::vector<Interval> PositivityDomain::within(Interval window) const
{
    std::vector<Interval> out;
    if (!periodic_) {
        for (auto iv : intervals_) {
            const Interval c{std::max(iv.lo, window.lo), std::min(iv.hi, window.hi)};
            if (c.hi > c.lo) out.push_back(c);
        }
        return out;
    }
    const double lo = std::max(window.lo, outer_.lo), hi = std::min(window.hi, outer_.hi);
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        if (hi > lo) throw Error(Errc::InvalidArgument, "window must be bounded for a periodic domain");
        return out;
    }
    const double vlo = log_ ? std::log(std::max(lo, std::numeric_limits<double>::min())) : lo;
    const double vhi = log_ ? std::log(hi) : hi;
    const double j0 = std::floor((alpha_ * vlo - phase_ + kPi / 2) / (2 * kPi));
    for (double j = j0;; j += 1) {
        const double start = -kPi / 2 + 2 * kPi * j;
        double a = (start + phase_) / alpha_, b = (start + kPi + phase_) / alpha_;
        if (a >= vhi) break;
        if (log_) {
            a = std::exp(a);
            b = std::exp(b);
        }
        const Interval c{std::max(a, lo), std::min(b, hi)};
        if (c.hi > c.lo) out.push_back(c);
        if (out.size() > 100000) throw Error(Errc::InvalidArgument, "window spans too many components");
    }
    return out;
}

double RadialProfile::core(double r) const
{
    const double M = coeffs.first, N = coeffs.second;
    switch (family) {
    case Family::ConformalPower: return M * std::pow(r, alpha) + N * std::pow(r, -alpha);
    case Family::ConformalLog: return M + N * std::log(r);
    case Family::ConformalOscillatory: return M * std::cos(alpha * std::log(r)) + N * std::sin(alpha * std::log(r));
    case Family::CylinderHyperbolic: return M * std::cosh(alpha * r) + N * std::sinh(alpha * r);
    case Family::CylinderLinear: return M + N * r;
    case Family::CylinderTrigonometric: return M * std::cos(alpha * r) + N * std::sin(alpha * r);
    case Family::Spherical: return 1 / std::sin(r);
    case Family::Hyperbolic: return 1 / std::sinh(r);
    }
    return 0;
}

double RadialProfile::core_d1(double r) const
{
    const double M = coeffs.first, N = coeffs.second;
    switch (family) {
    case Family::ConformalPower: return alpha * (M * std::pow(r, alpha - 1) - N * std::pow(r, -alpha - 1));
    case Family::ConformalLog: return N / r;
    case Family::ConformalOscillatory: {
        const double t = alpha * std::log(r);
        return alpha / r * (-M * std::sin(t) + N * std::cos(t));
    }
    case Family::CylinderHyperbolic: return alpha * (M * std::sinh(alpha * r) + N * std::cosh(alpha * r));
    case Family::CylinderLinear: return N;
    case Family::CylinderTrigonometric: return alpha * (-M * std::sin(alpha * r) + N * std::cos(alpha * r));
    case Family::Spherical: return -std::cos(r) / (std::sin(r) * std::sin(r));
    case Family::Hyperbolic: return -std::cosh(r) / (std::sinh(r) * std::sinh(r));
    }
    return 0;
}

double RadialProfile::core_d2(double r) const
{
    const double M = coeffs.first, N = coeffs.second;
    switch (family) {
    case Family::ConformalPower:
        return alpha * ((alpha - 1) * M * std::pow(r, alpha - 2) + (alpha + 1) * N * std::pow(r, -alpha - 2));
    case Family::ConformalLog: return -N / (r * r);
    case Family::ConformalOscillatory: return -core_d1(r) / r - alpha * alpha / (r * r) * core(r);
    case Family::CylinderHyperbolic: return alpha * alpha * core(r);
    case Family::CylinderLinear: return 0;
    case Family::CylinderTrigonometric: return -alpha * alpha * core(r);
    case Family::Spherical: {
        const double s = std::sin(r);
        return (1 + std::cos(r) * std::cos(r)) / (s * s * s);
    }
    case Family::Hyperbolic: {
        const double s = std::sinh(r);
        return (1 + std::cosh(r) * std::cosh(r)) / (s * s * s);
    }
    }
    return 0;
}

double RadialProfile::h(double r) const { return core(r); }

MetricSpec RadialProfile::metric() const
{
    const RadialProfile self = *this;
    Interval hull{-kInf, kInf};
    if (is_conformal(family) || family == Family::Hyperbolic) hull = {0, kInf};
    if (family == Family::Spherical) hull = {0, kPi};

    MetricSpec m;
    m.r_interval = hull;
    if (family == Family::Spherical || family == Family::Hyperbolic) {
        const bool sphere = family == Family::Spherical;
        m.a = [](double) { return 1.0; };
        m.da = [](double) { return 0.0; };
        m.b = [sphere](double r) { return sphere ? std::sin(r) : std::sinh(r); };
        m.db = [sphere](double r) { return sphere ? std::cos(r) : std::cosh(r); };
        m.d2b = [sphere](double r) { return sphere ? -std::sin(r) : std::sinh(r); };
        return m;
    }
    // b = C^P, P = (1-q)/2
    const double P = (1 - q) / 2;
    auto b = [self, P](double r) { return std::pow(self.core(r), P); };
    auto db = [self, P](double r) { return P * std::pow(self.core(r), P - 1) * self.core_d1(r); };
    auto d2b = [self, P](double r) {
        const double c = self.core(r), c1 = self.core_d1(r), c2 = self.core_d2(r);
        return P * (P - 1) * std::pow(c, P - 2) * c1 * c1 + P * std::pow(c, P - 1) * c2;
    };
    m.b = b;
    m.db = db;
    m.d2b = d2b;
    if (is_conformal(family)) {
        m.a = [b](double r) { return b(r) / r; };
        m.da = [b, db](double r) { return db(r) / r - b(r) / (r * r); };
    } else {
        m.a = b;
        m.da = db;
    }
    return m;
}

RadialProfile radial_profile(Family f, double q, double alpha, Coefficients coeffs)
{
    const double mu = admissible_mu(f, q, alpha);
    if (!std::isfinite(coeffs.first) || !std::isfinite(coeffs.second))
        throw Error(Errc::InvalidArgument, "coefficients must be finite");
    if (f == Family::Spherical || f == Family::Hyperbolic) {
        alpha = 0;
        coeffs = {};
    }
    if (!uses_alpha(f)) alpha = 0;
    RadialProfile p{f, q, alpha, mu, coeffs, make_domain(f, alpha, coeffs)};
    if (p.domain.empty()) throw Error(Errc::EmptyDomain, "the profile core is nowhere positive");
    return p;
}

WeightModeSets mode_sets_for_weight(Family f, int epsilon, double q, double alpha, int k_cap)
{
    const double mu = admissible_mu(f, q, alpha);
    if (epsilon != 1 && epsilon != -1) throw Error(Errc::InvalidArgument, "epsilon must be +1 or -1");
    const double a = uses_alpha(f) ? alpha : 0;
    WeightModeSets out{f, epsilon, q, a, mu, classify_case(Params(epsilon, q, mu)), printed_sets(f, epsilon, q, a),
                       false};
    out.consistent = same_up_to(out.delegated.sign_changing, out.printed.sign_changing, k_cap) &&
                     same_up_to(out.delegated.positive, out.printed.positive, k_cap) &&
                     out.delegated.nonnegative == out.printed.nonnegative;
    return out;
}

CaseClassification WeightModeSets::combined() const
{
    CaseClassification c;
    c.sign_changing = intersect(delegated.sign_changing, printed.sign_changing);
    c.positive = intersect(delegated.positive, printed.positive);
    if (delegated.nonnegative == printed.nonnegative) c.nonnegative = delegated.nonnegative;
    return c;
}

double PseudoRadialSolution::operator()(double r, double theta) const
{
    return profile.h(r) * evaluate_w(mode, theta);
}

PseudoRadialSolution build_solution(const RadialProfile& profile, const ModeSolution& mode)
{
    const Params& p = mode.params;
    if (std::abs(p.q() - profile.q) > 1e-12 * std::max(1.0, std::abs(profile.q)) ||
        std::abs(p.mu() - profile.mu) > 1e-12 * std::max(1.0, std::abs(profile.mu)))
        throw Error(Errc::ParamMismatch, "mode (q, mu) = (" + std::to_string(p.q()) + ", " + std::to_string(p.mu()) +
                                             ") does not match the profile (" + std::to_string(profile.q) + ", " +
                                             std::to_string(profile.mu) + ")");
    return {profile, mode};
}

GridSpec refine(const GridSpec& g) { return {g.r_min, g.r_max, 2 * g.n_r - 1, 2 * g.n_theta}; }

void check_radial_window(const RadialProfile& profile, const MetricSpec& m, double lo, double hi)
{
    if (!(lo > m.r_interval.lo && hi < m.r_interval.hi))
        throw Error(Errc::DomainViolation, "radii [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                               "] leave the metric's interval");
    const auto comp = profile.domain.component(lo);
    if (!comp || !(hi < comp->hi)) throw Error(Errc::DomainViolation, "radii cross a zero of the radial profile");
    auto margin = [](double e) { return kCoreZeroMargin * std::max(std::abs(e), 1.0); };
    const bool zero_lo = std::isfinite(comp->lo) && comp->lo != m.r_interval.lo;
    const bool zero_hi = std::isfinite(comp->hi) && comp->hi != m.r_interval.hi;
    if ((zero_lo && lo - comp->lo < margin(comp->lo)) || (zero_hi && comp->hi - hi < margin(comp->hi)))
        throw Error(Errc::DomainViolation, "radii come within the excluded neighbourhood of a profile zero");
}

std::vector<double> pde_residual_field(const PseudoRadialSolution& u, const MetricSpec& m, const GridSpec& grid,
                                       double exclude_w_below)
{
    if (grid.n_r < 32 || grid.n_theta < 64) throw Error(Errc::InvalidArgument, "grid must be at least 32 x 64");
    if (!(grid.r_max > grid.r_min)) throw Error(Errc::InvalidArgument, "need r_min < r_max");
    const double hr = (grid.r_max - grid.r_min) / (grid.n_r - 1);
    const double ht = 2 * kPi / grid.n_theta;

    // the whole stencil, ghost points included, must sit in one positive component
    check_radial_window(u.profile, m, grid.r_min - hr, grid.r_max + hr);

    const int eps = u.mode.params.epsilon();
    const double q = u.mode.params.q();
    std::vector<double> w(grid.n_theta);
    for (int j = 0; j < grid.n_theta; ++j) w[j] = evaluate_w(u.mode, ht * j);

    std::vector<double> out(static_cast<std::size_t>(grid.n_r) * grid.n_theta,
                            std::numeric_limits<double>::quiet_NaN());
    for (int i = 0; i < grid.n_r; ++i) {
        const double r = grid.r_min + hr * i;
        const MetricEval e = eval_metric(m, r);
        // (b/a)' = (b' a - b a') / a^2
        const double coef_rr = 1 / (e.a * e.a);
        const double coef_r = (e.db * e.a - e.b * e.da) / (e.a * e.a) / (e.a * e.b);
        const double coef_tt = 1 / (e.b * e.b);
        for (int j = 0; j < grid.n_theta; ++j) {
            if (std::abs(w[j]) < exclude_w_below) continue;
            const double th = ht * j;
            const double u0 = u(r, th);
            const double urp = u(r + hr, th), urm = u(r - hr, th);
            const double utp = u(r, th + ht), utm = u(r, th - ht);
            const double lap = coef_rr * (urp - 2 * u0 + urm) / (hr * hr) + coef_r * (urp - urm) / (2 * hr) +
                               coef_tt * (utp - 2 * u0 + utm) / (ht * ht);
            out[static_cast<std::size_t>(j) * grid.n_r + i] = lap - eps * signed_pow(u0, q);
        }
    }
    return out;
}

double pde_residual(const PseudoRadialSolution& u, const MetricSpec& m, const GridSpec& grid, double exclude_w_below)
{
    double worst = 0;
    for (double v : pde_residual_field(u, m, grid, exclude_w_below))
        if (!std::isnan(v)) worst = std::max(worst, std::abs(v));
    return worst;
}

RefinementCheck pde_residual_refinement(const PseudoRadialSolution& u, const MetricSpec& m, const GridSpec& grid,
                                        double exclude_w_below)
{
    const GridSpec fine = refine(grid);
    const auto c = pde_residual_field(u, m, grid, exclude_w_below);
    const auto f = pde_residual_field(u, m, fine, exclude_w_below);
    RefinementCheck out{0, 0};
    for (int j = 0; j < grid.n_theta; ++j)
        for (int i = 0; i < grid.n_r; ++i) {
            const double rc = c[static_cast<std::size_t>(j) * grid.n_r + i];
            const double rf = f[static_cast<std::size_t>(2 * j) * fine.n_r + 2 * i];
            if (std::isnan(rc) || std::isnan(rf)) continue;
            out.coarse = std::max(out.coarse, std::abs(rc));
            out.fine_on_coarse = std::max(out.fine_on_coarse, std::abs(rf));
        }
    return out;
}

}  // namespace pseudoradial
