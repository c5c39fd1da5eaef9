#pragma once
#include <span>
#include <vector>

#include "pseudoradial/phase.hpp"

namespace pseudoradial {

struct TrajectorySample {
    double t;
    PhasePoint state;
};

/// Samples in integration order; t = 0 first.
struct Trajectory {
    std::vector<TrajectorySample> samples;
};

/// max |E(s_i) - E(s_0)| over the samples.
double energy_drift(const Params& p, const Trajectory& traj);

struct IntegratorOptions {
    double rtol = 1e-12;
    double atol = 1e-12;
    double max_step = 0.1;
    long max_steps = 1'000'000;
    /// For q < 1, stop with SingularOriginReached when the orbit enters
    /// the detection neighbourhood of the origin.
    bool detect_singular_origin = true;
};

/// Adaptive Dormand-Prince 5(4) over [0, t_max]; every accepted step is recorded.
Trajectory integrate(const Params& p, PhasePoint s0, double t_max, double tol);

/// Same integrator, recording the state exactly at the given times.
/// Times must be strictly monotone and of one sign; negative times integrate backwards.
Trajectory integrate_at(const Params& p, PhasePoint s0, std::span<const double> times,
                        const IntegratorOptions& opt = {});

/// Radius of the origin neighbourhood treated as singular when q < 1.
/// Distance is measured by max(|x|, ((q+1) y^2 / 2)^{1/(q+1)}), which is
/// comparable along orbits of near-zero energy.
double singular_radius(const Params& p) noexcept;
double quasi_radius(const Params& p, PhasePoint s) noexcept;

/// Time of first return to the launch point, from direct integration.
/// Return is detected as a directed crossing of x = x0 (y0 != 0) or of y = 0 (y0 == 0).
double period_oracle(const Params& p, PhasePoint s0, double tol);

/// Four times the time from (0, s) to the first zero of y.
double quarter_period_oracle(const Params& p, double s, double tol);

/// Times in (0, T) at which the orbit through s0 crosses either axis.
std::vector<double> axis_crossing_times(const Params& p, PhasePoint s0, double tol);

/// Exact parametrisation of the right homoclinic loop (eps = +1, q < 1, mu > 0):
/// x(t) = x_* |sin(omega t)|^{2/(1-q)}, omega = (1-q) sqrt(mu) / 2, touching 0 at t = 0.
double homoclinic_frequency(const Params& p);
double homoclinic_period(const Params& p);
PhasePoint homoclinic_state(const Params& p, double t);
/// n >= 2 equally spaced samples over one loop [0, period].
Trajectory homoclinic_time_param(const Params& p, int n);

struct SplicedHomoclinic {
    double period;
    double integrated_time;  ///< apex to the switch point, numerically
    double tail_time;        ///< switch point to the origin, from the local expansion
};

/// Loop period by integrating from the apex down to switch_ratio * x_* and
/// closing the remaining arc with w ~ kappa tau^m (1 - mu tau^2 / (6 m)).
SplicedHomoclinic homoclinic_spliced(const Params& p, double switch_ratio = 1e-6, double tol = 1e-14);

}  // namespace pseudoradial
