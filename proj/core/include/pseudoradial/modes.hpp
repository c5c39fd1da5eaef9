#pragma once
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pseudoradial/period.hpp"
#include "pseudoradial/phase.hpp"

namespace pseudoradial {

/// Set of positive integers: an explicit finite list, or every k >= some start.
class ModeSet {
public:
    ModeSet() = default;
    static ModeSet finite(std::vector<int> values);
    static ModeSet all_from(int first);

    bool empty() const noexcept { return values_.empty() && !from_; }
    bool contains(int k) const noexcept;
    bool unbounded() const noexcept { return from_.has_value(); }
    /// First element of the unbounded tail, if any.
    std::optional<int> unbounded_from() const noexcept { return from_; }
    /// Elements not exceeding cap, in increasing order.
    std::vector<int> materialize(int cap) const;

    friend bool operator==(const ModeSet&, const ModeSet&) = default;
    friend ModeSet intersect(const ModeSet& a, const ModeSet& b);

private:
    std::vector<int> values_;
    std::optional<int> from_;
};

ModeSet intersect(const ModeSet& a, const ModeSet& b);

/// Integers k >= 1 with lo < k < hi; endpoints within 1e-12 (relative) of an
/// integer exclude it.  hi may be infinite.
ModeSet integers_between(double lo, double hi);

/// Which 2pi/k-periodic solutions exist for the given parameters.
struct CaseClassification {
    ModeSet sign_changing;
    ModeSet positive;
    std::optional<int> nonnegative;  ///< the unique k carrying a touching solution
    bool trivial_only() const noexcept
    {
        return sign_changing.empty() && positive.empty() && !nonnegative;
    }
};

CaseClassification classify_case(const Params& p);

enum class ModeKind { SignChanging, Positive, Nonnegative, Constant };

struct ModeSample {
    double theta;
    double w;
    double dw;
};

/// A 2pi-periodic solution stored on a uniform grid over [0, 2pi).
struct ModeSolution {
    Params params;
    int k;
    ModeKind kind;
    PhasePoint launch;      ///< (w(0), w'(0))
    double launch_speed;    ///< s on the period curve; 0 for closed-form modes
    double period;          ///< minimal period 2pi/k (the closed-form value for touching modes)
    double closure_error;   ///< |(w, w')(2pi) - (w, w')(0)| from the integration
    std::vector<ModeSample> samples;
};

struct ThetaSample {
    double theta;
    double w;
};

/// Launch speed s with T(s) = target, by bracketing and root finding on the period curve.
/// A bracket, when given, must enclose the root.
double find_launch_speed(const Params& p, Region region, double target,
                         std::optional<std::pair<double, double>> bracket = std::nullopt);

/// Canonical phases: sign-changing modes start at (0, s*), positive modes at
/// their minimum, touching modes at a zero.
ModeSolution solve_mode(const Params& p, int k, ModeKind kind);

/// w == value, for value 0 or an equilibrium; recorded as k = 0.
ModeSolution constant_mode(const Params& p, double value);

/// Quintic Hermite interpolation of the stored solution, using w'' from the ODE.
double evaluate_w(const ModeSolution& m, double theta);
/// n + 1 samples on [0, 2pi], the last one at exactly 2pi; needs n >= 4k.
std::vector<ThetaSample> sample_w(const ModeSolution& m, int n);

/// max |w'' + mu w - eps w|w|^{q-1}| with w'' from second differences.
/// Samples must be uniform, at least 64 of them; if they span exactly 2pi the
/// stencil wraps.  Points with |w| < exclude_below are skipped.
double ode_residual(const Params& p, std::span<const ThetaSample> samples, double exclude_below = 0);
/// Pointwise residuals behind ode_residual, one per sample; NaN where no
/// centred stencil exists (the ends of a non-periodic run, and the duplicated 2pi point).
std::vector<double> ode_residual_field(const Params& p, std::span<const ThetaSample> samples);

/// Sign changes around the closed curve (the duplicated 2pi endpoint is ignored).
int count_sign_changes(std::span<const ThetaSample> samples);
/// Number of separate runs of samples with |w| <= threshold, counted cyclically.
int count_touch_zeros(std::span<const ThetaSample> samples, double threshold);

}  // namespace pseudoradial
