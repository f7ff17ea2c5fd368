#include "matdyn/integrator.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace matdyn {

namespace {

// TR-BDF2 with gamma = 2 - sqrt(2): both implicit stages share the
// iteration matrix I - d*h*J with d = 1 - sqrt(2)/2.
constexpr double kGamma = 0.585786437626904951;     // 2 - sqrt(2)
constexpr double kD = 0.292893218813452476;         // gamma/2
constexpr double kBdfU = 1.207106781186547524;      // 1/(gamma*(2-gamma))
constexpr double kBdfYn = 0.207106781186547524;     // (1-gamma)^2/(gamma*(2-gamma))
// Difference between the embedded third-order weights and the method
// weights, applied to (f_n, f_gamma, f_{n+1}).
constexpr double kErrW0 = -0.138071187457698050;    // (1-sqrt(2))/3
constexpr double kErrW1 = 1.0 / 3.0;
constexpr double kErrW2 = -0.195262145875635317;    // -(2-sqrt(2))/3

constexpr double kDivergenceNorm = 1e12;

struct NewtonOutcome {
    bool converged = false;
    long iterations = 0;
};

class Stepper {
public:
    Stepper(SystemVariant variant, const ModelParameters& p,
            const ControlSettings& c, const SolverOptions& opts)
        : variant_(variant), p_(p), c_(c), opts_(opts)
    {
    }

    Eigen::Vector4d f(const Eigen::Vector4d& y) const
    {
        return rhs(variant_, p_, c_, PopulationState::from_vec(y));
    }

    void factor(const Eigen::Vector4d& y, double h)
    {
        Eigen::Matrix4d J;
        try {
            const Eigen::MatrixXd full =
                jacobian(variant_ == SystemVariant::ScarcityNoControl
                             ? SystemVariant::FullNoControl
                             : variant_,
                         p_, c_, PopulationState::from_vec(y));
            if (variant_ == SystemVariant::ScarcityNoControl) {
                // The decoupled variant has no 4x4 analytic form on file;
                // assemble it from the reduced block plus the Y row.
                J = scarcity_full_jacobian(y);
            } else {
                J = full;
            }
        } catch (const SingularInputError&) {
            J.setZero(); // fall back to fixed-point iteration matrix
        }
        lu_.compute(Eigen::Matrix4d::Identity() - kD * h * J);
    }

    Eigen::Matrix4d scarcity_full_jacobian(const Eigen::Vector4d& y) const
    {
        Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
        J(0, 0) = -(p_.nu_I + p_.mu_I + p_.b * y[2] / p_.K);
        J(0, 2) = p_.b * (1.0 - y[0] / p_.K);
        J(1, 0) = p_.r * p_.nu_I;
        J(1, 1) = -p_.mu_Y;
        J(1, 2) = p_.delta;
        J(1, 3) = -p_.nu_Y * p_.gamma;
        J(2, 2) = -(p_.delta + p_.mu_F);
        J(2, 3) = p_.nu_Y * p_.gamma;
        J(3, 0) = (1.0 - p_.r) * p_.nu_I;
        J(3, 3) = -p_.mu_M;
        return J;
    }

    Eigen::Vector4d solve(const Eigen::Vector4d& v) const
    {
        return lu_.solve(v);
    }

    // Solves u - d*h*f(u) = target by damped Newton with the current
    // factorisation.
    NewtonOutcome newton(Eigen::Vector4d& u, const Eigen::Vector4d& target,
                         double h) const
    {
        NewtonOutcome out;
        Eigen::Vector4d g = u - kD * h * f(u) - target;
        for (int iter = 0; iter < 10; ++iter) {
            ++out.iterations;
            Eigen::Vector4d step = lu_.solve(-g);
            double lambda = 1.0;
            Eigen::Vector4d u_next = u + step;
            Eigen::Vector4d g_next = u_next - kD * h * f(u_next) - target;
            for (int halvings = 0;
                 halvings < 3 && g_next.norm() > g.norm(); ++halvings) {
                lambda *= 0.5;
                u_next = u + lambda * step;
                g_next = u_next - kD * h * f(u_next) - target;
            }
            u = u_next;
            g = g_next;
            const double tol = 0.1 * std::min(opts_.rel_tol, opts_.abs_tol) *
                               std::max(1.0, u.cwiseAbs().maxCoeff());
            if ((lambda * step).cwiseAbs().maxCoeff() <= tol) {
                out.converged = true;
                return out;
            }
        }
        return out;
    }

private:
    SystemVariant variant_;
    const ModelParameters& p_;
    const ControlSettings& c_;
    const SolverOptions& opts_;
    Eigen::PartialPivLU<Eigen::Matrix4d> lu_;
};

// Cubic Hermite interpolation on one accepted step.
Eigen::Vector4d hermite(double t0, double h, const Eigen::Vector4d& y0,
                        const Eigen::Vector4d& f0, const Eigen::Vector4d& y1,
                        const Eigen::Vector4d& f1, double t)
{
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1;
}

} // namespace

const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Ok: return "ok";
    case SolveStatus::StepSizeUnderflow: return "step-size-underflow";
    case SolveStatus::NewtonFailure: return "newton-failure";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::MaxStepsExceeded: return "max-steps-exceeded";
    }
    return "?";
}

Trajectory integrate(SystemVariant variant, const ModelParameters& p,
                     const ControlSettings& c, const PopulationState& s0,
                     const SolverOptions& opts,
                     std::span<const double> sample_times)
{
    Trajectory traj;
    Stepper stepper(variant, p, c, opts);

    double t = 0.0;
    Eigen::Vector4d y = s0.vec();
    Eigen::Vector4d fy = stepper.f(y);
    double h = std::clamp(opts.h_init, opts.h_min, opts.h_max);

    std::size_t next_sample = 0;
    auto record_initial = [&] {
        if (sample_times.empty()) {
            traj.times.push_back(0.0);
            traj.states.push_back(s0);
        } else {
            while (next_sample < sample_times.size() &&
                   sample_times[next_sample] <= 0.0) {
                traj.times.push_back(sample_times[next_sample]);
                traj.states.push_back(s0);
                ++next_sample;
            }
        }
    };
    record_initial();

    auto finish = [&](SolveStatus status, std::string message) {
        traj.status = status;
        traj.message = std::move(message);
        traj.crossings = detect_regime_crossings(traj, p, c);
        return traj;
    };

    while (t < opts.t_end) {
        if (traj.stats.accepted + traj.stats.rejected >= opts.max_steps) {
            return finish(SolveStatus::MaxStepsExceeded,
                          "step budget exhausted before t_end");
        }
        h = std::min(h, opts.t_end - t);

        stepper.factor(y, h);

        // Trapezoidal half-stage to t + gamma*h.
        const Eigen::Vector4d r1 = y + kD * h * fy;
        Eigen::Vector4d u = y + kGamma * h * fy;
        NewtonOutcome n1 = stepper.newton(u, r1, h);
        traj.stats.newton_iterations += n1.iterations;
        if (!n1.converged) {
            stepper.factor(u, h);
            ++traj.stats.jacobian_rebuilds;
            n1 = stepper.newton(u, r1, h);
            traj.stats.newton_iterations += n1.iterations;
        }

        // BDF2 stage to t + h.
        bool stage2_ok = false;
        Eigen::Vector4d ynew;
        if (n1.converged) {
            const Eigen::Vector4d r2 = kBdfU * u - kBdfYn * y;
            ynew = u + ((1.0 - kGamma) / kGamma) * (u - y);
            NewtonOutcome n2 = stepper.newton(ynew, r2, h);
            traj.stats.newton_iterations += n2.iterations;
            if (!n2.converged) {
                stepper.factor(ynew, h);
                ++traj.stats.jacobian_rebuilds;
                n2 = stepper.newton(ynew, r2, h);
                traj.stats.newton_iterations += n2.iterations;
            }
            stage2_ok = n2.converged;
        }

        if (!stage2_ok) {
            h *= 0.25;
            ++traj.stats.rejected;
            if (h < opts.h_min) {
                return finish(SolveStatus::NewtonFailure,
                              "Newton iteration failed to converge at the "
                              "minimum step size");
            }
            continue;
        }

        const Eigen::Vector4d fu = stepper.f(u);
        const Eigen::Vector4d fnew = stepper.f(ynew);

        // Embedded third-order error estimate, stiffness-filtered through
        // the held iteration matrix (I - d h J).
        Eigen::Vector4d est =
            h * (kErrW0 * fy + kErrW1 * fu + kErrW2 * fnew);
        est = stepper.solve(est);
        double err = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double w =
                opts.abs_tol +
                opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double e = est[i] / w;
            err += e * e;
        }
        err = std::sqrt(err / 4.0);

        if (!std::isfinite(err) || ynew.cwiseAbs().maxCoeff() > kDivergenceNorm) {
            return finish(SolveStatus::Diverged,
                          "state norm exceeded 1e12");
        }

        if (err > 1.0) {
            ++traj.stats.rejected;
            h = std::max(h * std::clamp(0.9 * std::pow(err, -1.0 / 3.0),
                                        0.1, 0.5),
                         opts.h_min * 0.5);
            if (h < opts.h_min) {
                return finish(SolveStatus::StepSizeUnderflow,
                              "error control drove the step below h_min");
            }
            continue;
        }

        // Positivity accounting: a dip below -abs_tol rejects the step,
        // a dip inside (-abs_tol, 0) is clamped to zero and logged.
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) {
            worst = std::min(worst, ynew[i]);
        }
        if (worst < -opts.abs_tol) {
            ++traj.stats.rejected;
            h = std::max(h * 0.5, opts.h_min * 0.5);
            if (h < opts.h_min) {
                return finish(SolveStatus::StepSizeUnderflow,
                              "positivity control drove the step below "
                              "h_min");
            }
            continue;
        }
        for (int i = 0; i < 4; ++i) {
            if (ynew[i] < 0.0) {
                traj.clamp_events.push_back(
                    ClampEvent{t + h, i, ynew[i]});
                ++traj.stats.clamps;
                ynew[i] = 0.0;
            }
        }

        // Accepted: emit samples inside (t, t+h] by cubic Hermite.
        ++traj.stats.accepted;
        if (sample_times.empty()) {
            traj.times.push_back(t + h);
            traj.states.push_back(PopulationState::from_vec(ynew));
        } else {
            while (next_sample < sample_times.size() &&
                   sample_times[next_sample] <= t + h) {
                const double ts = sample_times[next_sample];
                Eigen::Vector4d ys =
                    ts >= t + h ? ynew
                                : hermite(t, h, y, fy, ynew, fnew, ts);
                traj.times.push_back(ts);
                traj.states.push_back(PopulationState::from_vec(ys));
                ++next_sample;
            }
        }

        t += h;
        y = ynew;
        fy = fnew;
        h = std::clamp(h * std::clamp(0.9 * std::pow(std::max(err, 1e-10),
                                                     -1.0 / 3.0),
                                      0.2, 5.0),
                       opts.h_min, opts.h_max);

        if (sample_times.empty() == false &&
            next_sample >= sample_times.size()) {
            break;
        }
    }

    return finish(SolveStatus::Ok, "");
}

Trajectory integrate_reference(SystemVariant variant,
                               const ModelParameters& p,
                               const ControlSettings& c,
                               const PopulationState& s0, double fixed_h,
                               double t_end, long stride)
{
    Trajectory traj;
    auto f = [&](const Eigen::Vector4d& y) {
        return rhs(variant, p, c, PopulationState::from_vec(y));
    };

    Eigen::Vector4d y = s0.vec();
    traj.times.push_back(0.0);
    traj.states.push_back(s0);

    const long steps = static_cast<long>(std::ceil(t_end / fixed_h));
    const double h = t_end / static_cast<double>(steps);
    double t = 0.0;
    for (long n = 0; n < steps; ++n) {
        const Eigen::Vector4d k1 = f(y);
        const Eigen::Vector4d k2 = f(y + 0.5 * h * k1);
        const Eigen::Vector4d k3 = f(y + 0.5 * h * k2);
        const Eigen::Vector4d k4 = f(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = (n + 1) * h;
        ++traj.stats.accepted;
        if (y.cwiseAbs().maxCoeff() > kDivergenceNorm) {
            traj.status = SolveStatus::Diverged;
            traj.message = "reference integration diverged";
            traj.times.push_back(t);
            traj.states.push_back(PopulationState::from_vec(y));
            return traj;
        }
        if ((n + 1) % stride == 0 || n + 1 == steps) {
            traj.times.push_back(t);
            traj.states.push_back(PopulationState::from_vec(y));
        }
    }
    traj.crossings = detect_regime_crossings(traj, p, c);
    return traj;
}

std::vector<RegimeCrossing> detect_regime_crossings(const Trajectory& traj,
                                                    const ModelParameters& p,
                                                    const ControlSettings& c)
{
    std::vector<RegimeCrossing> crossings;
    if (traj.states.size() < 2) {
        return crossings;
    }
    auto surplus = [&](const PopulationState& s) {
        return p.gamma * s.M - (s.Y + c.yp);
    };
    double prev = surplus(traj.states.front());
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
        const double cur = surplus(traj.states[i]);
        if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
            const double t0 = traj.times[i - 1];
            const double t1 = traj.times[i];
            const double tc = t0 + (t1 - t0) * (-prev) / (cur - prev);
            crossings.push_back(RegimeCrossing{tc, cur > prev ? +1 : -1});
        }
        prev = cur;
    }
    return crossings;
}

} // namespace matdyn
