#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pseudoradial/error.hpp"
#include "pseudoradial/geometry.hpp"
#include "pseudoradial/integrate.hpp"
#include "pseudoradial/modes.hpp"
#include "pseudoradial/period.hpp"
#include "pseudoradial/phase.hpp"

namespace pseudoradial::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kDefaultKCap = 64;

std::string num(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// JSON numbers: doubles are written by the library in shortest round-trip form.
ordered_json json_num(double v)
{
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? ordered_json(nullptr) : ordered_json(num(v));
}

std::string_view kind_name(ModeKind k)
{
    switch (k) {
    case ModeKind::SignChanging: return "sign-changing";
    case ModeKind::Positive: return "positive";
    case ModeKind::Nonnegative: return "nonnegative";
    case ModeKind::Constant: return "constant";
    }
    return "?";
}

std::string_view critical_name(CriticalKind k)
{
    switch (k) {
    case CriticalKind::Center: return "center";
    case CriticalKind::Saddle: return "saddle";
    case CriticalKind::SingularOrigin: return "singular";
    }
    return "?";
}

ordered_json set_json(const ModeSet& s, int cap)
{
    ordered_json j;
    j["values"] = s.materialize(cap);
    j["unbounded_from"] = s.unbounded_from() ? ordered_json(*s.unbounded_from()) : ordered_json(nullptr);
    return j;
}

ordered_json classification_json(const CaseClassification& c, int cap)
{
    ordered_json j;
    j["sign_changing"] = set_json(c.sign_changing, cap);
    j["positive"] = set_json(c.positive, cap);
    j["nonnegative"] = c.nonnegative ? ordered_json(*c.nonnegative) : ordered_json(nullptr);
    j["trivial_only"] = c.trivial_only();
    return j;
}

/// Flags shared by construct and verify.
struct FieldArgs {
    std::string family;
    std::optional<int> epsilon;
    double q = 0, alpha = 0, M = 1, N = 0;
    int k = 0;
    std::string kind;
    double r_min = 0, r_max = 0;
    int nr = 0, ntheta = 0;
    std::optional<double> exclude_w;
};

const std::map<std::string, ModeKind> kKinds{{"sign-changing", ModeKind::SignChanging},
                                             {"positive", ModeKind::Positive},
                                             {"nonnegative", ModeKind::Nonnegative}};

void add_field_flags(CLI::App* sub, FieldArgs& a)
{
    std::vector<std::string> names;
    for (Family f : kAllFamilies) names.emplace_back(to_string(f));
    sub->add_option("--family", a.family, "metric family")->required()->check(CLI::IsMember(names));
    sub->add_option("--epsilon", a.epsilon, "sign of the nonlinearity (default -1 for spherical/hyperbolic)")
        ->check(CLI::IsMember({-1, 1}));
    sub->add_option("--q", a.q, "exponent")->required();
    sub->add_option("--alpha", a.alpha, "family parameter");
    sub->add_option("--M", a.M, "first core coefficient");
    sub->add_option("--N", a.N, "second core coefficient");
    sub->add_option("--k", a.k, "mode number")->required();
    sub->add_option("--kind", a.kind, "mode kind")->required()->check(CLI::IsMember(kKinds));
    sub->add_option("--r-min", a.r_min)->required();
    sub->add_option("--r-max", a.r_max)->required();
    sub->add_option("--nr", a.nr, "radial grid points")->required();
    sub->add_option("--ntheta", a.ntheta, "angular grid points")->required();
}

struct Field {
    PseudoRadialSolution solution;
    MetricSpec metric;
    GridSpec grid;
};

Field build_field(const FieldArgs& a)
{
    const Family f = *parse_family(a.family);
    int eps = 0;
    if (a.epsilon) {
        eps = *a.epsilon;
    } else if (f == Family::Spherical || f == Family::Hyperbolic) {
        eps = -1;
    } else {
        throw Error(Errc::InvalidArgument, "--epsilon is required for family " + a.family);
    }
    const RadialProfile profile = radial_profile(f, a.q, a.alpha, {a.M, a.N});
    const ModeSolution mode = solve_mode(Params(eps, a.q, profile.mu), a.k, kKinds.at(a.kind));
    Field out{build_solution(profile, mode), profile.metric(), {a.r_min, a.r_max, a.nr, a.ntheta}};
    if (a.nr < 2 || a.ntheta < 1) throw Error(Errc::InvalidArgument, "need nr >= 2 and ntheta >= 1");
    if (!(a.r_max > a.r_min)) throw Error(Errc::InvalidArgument, "need r-min < r-max");
    return out;
}

/// Residuals near zeros of w are skipped by default when w is only Hoelder there.
double default_exclusion(const Field& f)
{
    const ModeSolution& m = f.solution.mode;
    if (!m.params.sublinear() || m.kind == ModeKind::Positive) return 0;
    double wmax = 0;
    for (const auto& s : m.samples) wmax = std::max(wmax, std::abs(s.w));
    return 0.1 * wmax;
}

int classify_cmd(int eps, double q, double mu, int cap, std::ostream& out)
{
    const Params p(eps, q, mu);
    const CaseClassification c = classify_case(p);
    ordered_json j;
    j["epsilon"] = eps;
    j["q"] = json_num(q);
    j["mu"] = json_num(mu);
    j["k_cap"] = cap;
    j["origin"] = critical_name(critical_points(p).points.front().kind);
    const ordered_json sets = classification_json(c, cap);
    for (auto& [key, v] : sets.items()) j[key] = v;
    out << j.dump(2) << '\n';
    return kOk;
}

std::vector<double> speed_grid(double lo, double hi, int n, bool log_spacing)
{
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : double(i) / (n - 1);
        s[i] = log_spacing ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
    }
    if (n > 1) s.back() = hi;
    return s;
}

/// One row of a sweep: the classification at mu, summarised by set ends.
struct SweepRow {
    double mu;
    std::string origin;
    CaseClassification c;
};

std::string set_lo(const ModeSet& s, int cap)
{
    const auto v = s.materialize(cap);
    return v.empty() ? "" : std::to_string(v.front());
}

std::string set_hi(const ModeSet& s, int cap)
{
    if (s.unbounded()) return "inf";
    const auto v = s.materialize(cap);
    return v.empty() ? "" : std::to_string(v.back());
}

std::string row_signature(const SweepRow& r, int cap)
{
    return r.origin + "|" + set_lo(r.c.sign_changing, cap) + "|" + set_hi(r.c.sign_changing, cap) + "|" +
           set_lo(r.c.positive, cap) + "|" + set_hi(r.c.positive, cap) + "|" +
           (r.c.nonnegative ? std::to_string(*r.c.nonnegative) : "");
}

int exit_code_for(const Error& e)
{
    if (e.code() == Errc::InvalidArgument) return kUsage;
    return is_domain_refusal(e.code()) ? kRefused : kNumericalFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Pseudo-radial solutions of semilinear equations on warped surfaces"};
    app.name("pseudoradial");
    app.require_subcommand(1);

    int eps = 1;
    double q = 0, mu = 0;
    int k_cap = kDefaultKCap;

    auto* classify = app.add_subcommand("classify", "mode sets for (epsilon, q, mu) as JSON");
    classify->add_option("--epsilon", eps)->required()->check(CLI::IsMember({-1, 1}));
    classify->add_option("--q", q)->required();
    classify->add_option("--mu", mu)->required();
    classify->add_option("--k-cap", k_cap, "largest k listed for unbounded sets")->check(CLI::PositiveNumber);

    std::string region_name;
    double s_min = 0, s_max = 0;
    int n = 0;
    std::string spacing = "log";
    const std::map<std::string, Region> regions{{"origin", Region::Origin}, {"center", Region::Center}};
    auto* period_cmd = app.add_subcommand("period", "period curve T(s) as CSV");
    period_cmd->add_option("--epsilon", eps)->required()->check(CLI::IsMember({-1, 1}));
    period_cmd->add_option("--q", q)->required();
    period_cmd->add_option("--mu", mu)->required();
    period_cmd->add_option("--region", region_name)->required()->check(CLI::IsMember(regions));
    period_cmd->add_option("--s-min", s_min)->required();
    period_cmd->add_option("--s-max", s_max)->required();
    period_cmd->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    period_cmd->add_option("--spacing", spacing, "log or linear")->check(CLI::IsMember({"log", "linear"}));

    int k = 0;
    std::string kind;
    std::optional<int> n_samples;
    auto* modes = app.add_subcommand("modes", "one angular solution w(theta) as CSV");
    modes->add_option("--epsilon", eps)->required()->check(CLI::IsMember({-1, 1}));
    modes->add_option("--q", q)->required();
    modes->add_option("--mu", mu)->required();
    modes->add_option("--k", k)->required();
    modes->add_option("--kind", kind)->required()->check(CLI::IsMember(kKinds));
    modes->add_option("--samples", n_samples, "intervals on [0, 2pi]");

    std::string family;
    double alpha = 0;
    auto* weights = app.add_subcommand("weights", "mode sets for a metric family as JSON");
    {
        std::vector<std::string> names;
        for (Family f : kAllFamilies) names.emplace_back(to_string(f));
        weights->add_option("--family", family)->required()->check(CLI::IsMember(names));
    }
    weights->add_option("--q", q)->required();
    weights->add_option("--alpha", alpha);
    weights->add_option("--epsilon", eps)->required()->check(CLI::IsMember({-1, 1}));
    weights->add_option("--k-cap", k_cap)->check(CLI::PositiveNumber);

    FieldArgs construct_args, verify_args;
    auto* construct = app.add_subcommand("construct", "u = h(r) w(theta) on a polar grid as CSV");
    add_field_flags(construct, construct_args);
    auto* verify = app.add_subcommand("verify", "PDE residual and its refinement ratio as JSON");
    add_field_flags(verify, verify_args);
    verify->add_option("--exclude-w", verify_args.exclude_w, "skip grid points with |w| below this");

    double mu_min = 0, mu_max = 0;
    auto* sweep = app.add_subcommand("sweep", "classification along a mu range as CSV");
    sweep->add_option("--epsilon", eps)->required()->check(CLI::IsMember({-1, 1}));
    sweep->add_option("--q", q)->required();
    sweep->add_option("--mu-min", mu_min)->required();
    sweep->add_option("--mu-max", mu_max)->required();
    sweep->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    sweep->add_option("--k-cap", k_cap)->check(CLI::PositiveNumber);

    double s = 0;
    auto* orbit = app.add_subcommand("orbit", "one closed orbit (t, x, y) as CSV");
    orbit->add_option("--epsilon", eps)->required()->check(CLI::IsMember({-1, 1}));
    orbit->add_option("--q", q)->required();
    orbit->add_option("--mu", mu)->required();
    orbit->add_option("--region", region_name)->required()->check(CLI::IsMember(regions));
    orbit->add_option("--s", s, "launch speed")->required();
    orbit->add_option("--samples", n, "intervals over one period")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (*classify) return classify_cmd(eps, q, mu, k_cap, out);

        if (*period_cmd) {
            const Params p(eps, q, mu);
            if (!(s_min > 0) || !(s_max >= s_min)) throw Error(Errc::InvalidArgument, "need 0 < s-min <= s-max");
            const auto speeds = speed_grid(s_min, s_max, n, spacing == "log");
            const auto curve = period_curve(p, regions.at(region_name), speeds);
            out << "s,T\n";
            for (const auto& c : curve) out << num(c.s) << ',' << num(c.T) << '\n';
            return kOk;
        }

        if (*modes) {
            const Params p(eps, q, mu);
            const ModeSolution m = solve_mode(p, k, kKinds.at(kind));
            const int samples = n_samples.value_or(std::max(256, 64 * k));
            const auto w = sample_w(m, samples);
            out << "theta,w\n";
            for (const auto& t : w) out << num(t.theta) << ',' << num(t.w) << '\n';
            return kOk;
        }

        if (*weights) {
            const WeightModeSets w = mode_sets_for_weight(*parse_family(family), eps, q, alpha, k_cap);
            ordered_json j;
            j["family"] = family;
            j["epsilon"] = eps;
            j["q"] = json_num(w.q);
            j["alpha"] = json_num(w.alpha);
            j["mu"] = json_num(w.mu);
            j["k_cap"] = k_cap;
            j["delegated"] = classification_json(w.delegated, k_cap);
            j["printed"] = classification_json(w.printed, k_cap);
            j["consistent"] = w.consistent;
            j["combined"] = classification_json(w.combined(), k_cap);
            out << j.dump(2) << '\n';
            return kOk;
        }

        if (*construct) {
            const Field f = build_field(construct_args);
            check_radial_window(f.solution.profile, f.metric, f.grid.r_min, f.grid.r_max);
            const double hr = (f.grid.r_max - f.grid.r_min) / (f.grid.n_r - 1);
            const double ht = 2 * std::numbers::pi / f.grid.n_theta;
            std::ostringstream buf;
            buf << "r,theta,u\n";
            for (int j = 0; j < f.grid.n_theta; ++j) {
                const double th = ht * j;
                const double w = evaluate_w(f.solution.mode, th);
                for (int i = 0; i < f.grid.n_r; ++i) {
                    const double r = i + 1 == f.grid.n_r ? f.grid.r_max : f.grid.r_min + hr * i;
                    buf << num(r) << ',' << num(th) << ',' << num(f.solution.profile.h(r) * w) << '\n';
                }
            }
            out << buf.str();
            return kOk;
        }

        if (*verify) {
            const Field f = build_field(verify_args);
            const double exclude = verify_args.exclude_w.value_or(default_exclusion(f));
            const RefinementCheck rc = pde_residual_refinement(f.solution, f.metric, f.grid, exclude);
            ordered_json j;
            j["family"] = verify_args.family;
            j["epsilon"] = f.solution.mode.params.epsilon();
            j["q"] = json_num(verify_args.q);
            j["alpha"] = json_num(f.solution.profile.alpha);
            j["mu"] = json_num(f.solution.profile.mu);
            j["k"] = verify_args.k;
            j["kind"] = kind_name(f.solution.mode.kind);
            j["grid"] = {{"r_min", json_num(f.grid.r_min)},
                         {"r_max", json_num(f.grid.r_max)},
                         {"nr", f.grid.n_r},
                         {"ntheta", f.grid.n_theta}};
            j["exclude_w_below"] = json_num(exclude);
            j["residual_max"] = json_num(rc.coarse);
            j["residual_max_refined"] = json_num(rc.fine_on_coarse);
            j["residual_ratio_refined"] = json_num(rc.ratio());
            out << j.dump(2) << '\n';
            return kOk;
        }

        if (*sweep) {
            if (!(mu_max >= mu_min)) throw Error(Errc::InvalidArgument, "need mu-min <= mu-max");
            const Params probe(eps, q, mu_min);  // validates eps and q once
            (void)probe;
            const auto mus = speed_grid(mu_min, mu_max, n, false);
            std::vector<std::future<SweepRow>> jobs;
            jobs.reserve(mus.size());
            for (double m : mus)
                jobs.push_back(std::async(std::launch::async, [=] {
                    const Params p(eps, q, m);
                    return SweepRow{m, std::string(critical_name(critical_points(p).points.front().kind)),
                                    classify_case(p)};
                }));
            std::ostringstream buf;
            buf << "mu,origin,sign_changing_min,sign_changing_max,positive_min,positive_max,nonnegative,boundary\n";
            std::string prev;
            for (std::size_t i = 0; i < jobs.size(); ++i) {
                const SweepRow r = jobs[i].get();
                const std::string sig = row_signature(r, k_cap);
                const bool boundary = i > 0 && sig != prev;
                prev = sig;
                buf << num(r.mu) << ',' << r.origin << ',' << set_lo(r.c.sign_changing, k_cap) << ','
                    << set_hi(r.c.sign_changing, k_cap) << ',' << set_lo(r.c.positive, k_cap) << ','
                    << set_hi(r.c.positive, k_cap) << ','
                    << (r.c.nonnegative ? std::to_string(*r.c.nonnegative) : "") << ',' << (boundary ? 1 : 0)
                    << '\n';
            }
            out << buf.str();
            return kOk;
        }

        if (*orbit) {
            const Params p(eps, q, mu);
            const Region r = regions.at(region_name);
            const PhasePoint s0 = launch_point(p, r, s);
            const double T = period(p, r, s);
            const int samples = n > 0 ? n : 256;
            std::vector<double> times(samples);  // the launch point is recorded at t = 0
            for (int i = 1; i <= samples; ++i) times[i - 1] = T * i / samples;
            IntegratorOptions opt;
            opt.rtol = opt.atol = 1e-12;
            const Trajectory traj = integrate_at(p, s0, times, opt);
            out << "t,x,y\n";
            for (const auto& smp : traj.samples)
                out << num(smp.t) << ',' << num(smp.state.x) << ',' << num(smp.state.y) << '\n';
            return kOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kUsage;
}

}  // namespace pseudoradial::cli
