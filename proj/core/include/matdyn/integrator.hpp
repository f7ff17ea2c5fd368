#ifndef MATDYN_INTEGRATOR_HPP
#define MATDYN_INTEGRATOR_HPP

#include "matdyn/model.hpp"
#include "matdyn/parameters.hpp"
#include "matdyn/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace matdyn {

struct SolverOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double h_init = 1e-2; // days
    double h_min = 1e-12;
    double h_max = 100.0;
    double t_end = 2000.0;
    long max_steps = 2'000'000;
};

enum class SolveStatus {
    Ok,
    StepSizeUnderflow,
    NewtonFailure,
    Diverged,
    MaxStepsExceeded,
};

const char* to_string(SolveStatus s);

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    long newton_iterations = 0;
    long jacobian_rebuilds = 0;
    long clamps = 0;
};

struct ClampEvent {
    double time = 0.0;
    int component = 0;
    double value = 0.0;
};

/// Crossing of the surface gamma*M = Y + Y_P. direction = +1 when the
/// solution enters the male-abundance side, -1 when it leaves it.
struct RegimeCrossing {
    double time = 0.0;
    int direction = 0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<PopulationState> states;
    std::vector<RegimeCrossing> crossings;
    std::vector<ClampEvent> clamp_events;
    StepStats stats;
    SolveStatus status = SolveStatus::Ok;
    std::string message;

    const PopulationState& back() const { return states.back(); }
};

/// Adaptive TR-BDF2 integration (trapezoidal half-stage to t + (2-sqrt 2)h
/// followed by a BDF2 stage to t + h, shared iteration matrix, embedded
/// third-order error estimate). Implicit stages are solved by damped
/// Newton with the analytic Jacobian. Components falling below -abs_tol
/// reject the step; components in (-abs_tol, 0) are clamped to zero and
/// logged. If sample_times is nonempty the trajectory is reported on that
/// grid via cubic Hermite dense output, otherwise at every accepted step.
Trajectory integrate(SystemVariant variant, const ModelParameters& p,
                     const ControlSettings& c, const PopulationState& s0,
                     const SolverOptions& opts,
                     std::span<const double> sample_times = {});

/// Fixed-step classical fourth-order Runge-Kutta reference integrator.
/// No adaptivity and no clamping: raw values are reported every
/// `stride`-th step. Stability for the reference parameter set needs
/// roughly h <= 0.01 day. Declares divergence when the state norm
/// exceeds 1e12.
Trajectory integrate_reference(SystemVariant variant,
                               const ModelParameters& p,
                               const ControlSettings& c,
                               const PopulationState& s0, double fixed_h,
                               double t_end, long stride = 1);

/// Sign changes of gamma*M - (Y + Y_P) along a sampled trajectory,
/// located by linear interpolation between consecutive samples.
std::vector<RegimeCrossing> detect_regime_crossings(const Trajectory& traj,
                                                    const ModelParameters& p,
                                                    const ControlSettings& c);

} // namespace matdyn

#endif
