#pragma once
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pseudoradial/modes.hpp"

namespace pseudoradial {

/// Warped metrics g = a(r)^2 dr^2 + b(r)^2 dtheta^2 for which a separated
/// solution h(r) w(theta) exists.  Each family has a "core" C(r) and h = C.
enum class Family {
    ConformalPower,         ///< C = M r^alpha + N r^-alpha, a = C^{(1-q)/2}/r, b = r a
    ConformalLog,           ///< C = M + N ln r
    ConformalOscillatory,   ///< C = M cos(alpha ln r) + N sin(alpha ln r)
    CylinderHyperbolic,     ///< C = A cosh(alpha r) + B sinh(alpha r), a = b = C^{(1-q)/2}
    CylinderLinear,         ///< C = A + B r
    CylinderTrigonometric,  ///< C = A cos(alpha r) + B sin(alpha r)
    Spherical,              ///< a = 1, b = sin r, q = 3, h = 1/sin r
    Hyperbolic,             ///< a = 1, b = sinh r, q = 3, h = 1/sinh r
};

std::string_view to_string(Family f) noexcept;
/// Accepts the kebab-case names printed by to_string.
std::optional<Family> parse_family(std::string_view name) noexcept;
constexpr Family kAllFamilies[] = {Family::ConformalPower,        Family::ConformalLog,
                                   Family::ConformalOscillatory,  Family::CylinderHyperbolic,
                                   Family::CylinderLinear,        Family::CylinderTrigonometric,
                                   Family::Spherical,             Family::Hyperbolic};

struct Interval {
    double lo;
    double hi;
};

/// a, b and optionally their analytic derivatives; missing derivatives are
/// replaced by central differences.
struct MetricSpec {
    std::function<double(double)> a;
    std::function<double(double)> b;
    std::function<double(double)> da;
    std::function<double(double)> db;
    std::function<double(double)> d2b;
    Interval r_interval;
};

MetricSpec euclidean_metric();

/// max over the grid of |L(r) / (a b^{(1+q)/(1-q)}) - mu (1-q)/2|, where
/// L = (b^{2/(1-q)} b' / a)' is the left side of the separability condition.
/// Zero exactly when h = b^{2/(1-q)} makes h(r) w(theta) separate with this mu.
double metric_condition_residual(const MetricSpec& m, double q, double mu, std::span<const double> r_grid);

/// The separation constant mu forced by a family.
double admissible_mu(Family f, double q, double alpha);

/// Open set where the core is positive.
class PositivityDomain {
public:
    /// Finite union of disjoint open intervals.
    static PositivityDomain from_intervals(std::vector<Interval> intervals);
    /// {v : cos(alpha v - phase) > 0} intersected with `outer`, with v = ln r
    /// when log_variable is set and v = r otherwise.
    static PositivityDomain periodic(double alpha, double phase, bool log_variable, Interval outer);

    bool contains(double r) const noexcept;
    bool empty() const noexcept;
    /// Maximal positive intervals meeting the window, clipped to it.
    std::vector<Interval> within(Interval window) const;
    /// The maximal positive interval containing r.
    std::optional<Interval> component(double r) const noexcept;

private:
    std::vector<Interval> intervals_;
    bool periodic_ = false;
    double alpha_ = 0, phase_ = 0;
    bool log_ = false;
    Interval outer_{0, 0};
};

struct Coefficients {
    double first = 1;   ///< M or A
    double second = 0;  ///< N or B
};

struct RadialProfile {
    Family family;
    double q;
    double alpha;
    double mu;
    Coefficients coeffs;
    PositivityDomain domain;

    /// h(r)
    double h(double r) const;
    /// Core value and its first two derivatives at r.
    double core(double r) const;
    double core_d1(double r) const;
    double core_d2(double r) const;
    /// The metric realising this profile.
    MetricSpec metric() const;
};

RadialProfile radial_profile(Family f, double q, double alpha, Coefficients coeffs = {});

struct WeightModeSets {
    Family family;
    int epsilon;
    double q;
    double alpha;
    double mu;
    /// From the separation constant mu through classify_case.
    CaseClassification delegated;
    /// The family's own statement of which modes occur.
    CaseClassification printed;
    bool consistent;
    /// Modes admitted by both derivations.
    CaseClassification combined() const;
};

/// Mode sets for a family, derived twice; `consistent` compares them up to k_cap.
WeightModeSets mode_sets_for_weight(Family f, int epsilon, double q, double alpha, int k_cap = 64);

/// u(r, theta) = h(r) w(theta)
struct PseudoRadialSolution {
    RadialProfile profile;
    ModeSolution mode;
    double operator()(double r, double theta) const;
};

PseudoRadialSolution build_solution(const RadialProfile& profile, const ModeSolution& mode);

struct GridSpec {
    double r_min;
    double r_max;
    int n_r;
    int n_theta;
};

/// Uniform refinement: halves both spacings.
GridSpec refine(const GridSpec& g);

/// Throws DomainViolation unless [lo, hi] lies inside the metric's interval and
/// inside one positive component of the profile, clear of the core's zeros.
void check_radial_window(const RadialProfile& profile, const MetricSpec& m, double lo, double hi);

/// max over the grid of |Delta_g u - eps u|u|^{q-1}| by second-order differences,
/// Delta_g = a^-2 d_rr + (ab)^-1 (b/a)' d_r + b^-2 d_thetatheta.
/// Grid points with |w(theta)| < exclude_w_below are skipped.
double pde_residual(const PseudoRadialSolution& u, const MetricSpec& m, const GridSpec& grid,
                    double exclude_w_below = 0);
/// Pointwise residuals on the grid, row-major in theta then r; NaN where skipped.
std::vector<double> pde_residual_field(const PseudoRadialSolution& u, const MetricSpec& m, const GridSpec& grid,
                                       double exclude_w_below = 0);

/// Residual maxima on a grid and on its refinement, the latter taken over the
/// nodes the two grids share, so both maxima see the same points.
struct RefinementCheck {
    double coarse;
    double fine_on_coarse;
    double ratio() const noexcept { return coarse / fine_on_coarse; }
};

RefinementCheck pde_residual_refinement(const PseudoRadialSolution& u, const MetricSpec& m, const GridSpec& grid,
                                        double exclude_w_below = 0);

}  // namespace pseudoradial
