#include "matdyn/integrator.hpp"

#include "matdyn/equilibria.hpp"

#include "test_support.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

using namespace matdyn;
using namespace matdyn::testing;

namespace {

const ModelParameters P1 = ModelParameters::reference();

std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        v.push_back(lo + (hi - lo) * i / (n - 1.0));
    }
    return v;
}

double state_gap(const PopulationState& a, const PopulationState& b)
{
    return (a.vec() - b.vec()).cwiseAbs().maxCoeff();
}

} // namespace

TEST_SUITE("stiff_integrator")
{

TEST_CASE("option sanity")
{
    SolverOptions opts;
    CHECK(opts.h_min <= opts.h_init);
    CHECK(opts.h_init <= opts.h_max);
    CHECK(opts.rel_tol > 0.0);
    CHECK(opts.abs_tol > 0.0);
}

TEST_CASE("extinction stays put")
{
    SolverOptions opts;
    opts.t_end = 100.0;
    const Trajectory traj =
        integrate(SystemVariant::FullNoControl, P1, {}, PopulationState{},
                  opts);
    CHECK(traj.status == SolveStatus::Ok);
    for (const PopulationState& s : traj.states) {
        CHECK(s.vec().cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("interior start settles at the endemic equilibrium")
{
    SolverOptions opts;
    opts.t_end = 2000.0;
    const Trajectory traj =
        integrate(SystemVariant::FullNoControl, P1, {},
                  PopulationState{100.0, 100.0, 100.0, 100.0}, opts);
    REQUIRE(traj.status == SolveStatus::Ok);
    const EquilibriumPoint star = endemic_equilibrium(P1);
    const double scale = star.state.vec().cwiseAbs().maxCoeff();
    CHECK(state_gap(traj.back(), star.state) <= 1e-3 * scale);
    CHECK(traj.stats.clamps == 0);
}

TEST_CASE("adaptive and reference integrations agree at matched times")
{
    std::mt19937 rng(4242);
    const auto samples = linspace(20.0, 200.0, 10);
    SolverOptions opts;
    opts.t_end = 200.0;
    for (int trial = 0; trial < 10; ++trial) {
        const PopulationState s0 = random_state(rng, 1500.0);
        const Trajectory fine = integrate_reference(
            SystemVariant::FullNoControl, P1, {}, s0, 0.01, 200.0, 2000);
        REQUIRE(fine.status == SolveStatus::Ok);
        const Trajectory adaptive = integrate(
            SystemVariant::FullNoControl, P1, {}, s0, opts, samples);
        REQUIRE(adaptive.status == SolveStatus::Ok);

        for (std::size_t i = 0; i < samples.size(); ++i) {
            // Reference records every 2000th step of h = 0.01: t = 20*k.
            const std::size_t ref_idx = i + 1;
            REQUIRE(fine.times[ref_idx] == doctest::Approx(samples[i]));
            const double scale = std::max(
                1.0, fine.states[ref_idx].vec().cwiseAbs().maxCoeff());
            CHECK(state_gap(adaptive.states[i], fine.states[ref_idx]) <=
                  1e-4 * scale);
        }
    }
}

TEST_CASE("reference integrator reproduces pure male decay")
{
    const PopulationState s0{0.0, 0.0, 0.0, 100.0};
    const Trajectory traj = integrate_reference(
        SystemVariant::FullNoControl, P1, {}, s0, 0.01, 10.0);
    const double exact = 100.0 * std::exp(-P1.mu_M * 10.0);
    CHECK(std::abs(traj.back().M - exact) <= 1e-8);
    CHECK(traj.back().I == 0.0);
    CHECK(traj.back().Y == 0.0);
    CHECK(traj.back().F == 0.0);
}

TEST_CASE("reference integrator converges at fourth order")
{
    const PopulationState s0{100.0, 100.0, 100.0, 100.0};
    const double t_end = 50.0;
    auto final_state = [&](double h) {
        return integrate_reference(SystemVariant::AbundanceNoControl, P1, {},
                                   s0, h, t_end)
            .back()
            .vec();
    };
    const Eigen::Vector4d truth = final_state(0.00625);
    const double e1 = (final_state(0.2) - truth).cwiseAbs().maxCoeff();
    const double e2 = (final_state(0.1) - truth).cwiseAbs().maxCoeff();
    const double e3 = (final_state(0.05) - truth).cwiseAbs().maxCoeff();
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 22.0);
    CHECK(e2 / e3 > 12.0);
    CHECK(e2 / e3 < 22.0);
}

TEST_CASE("error tightens with the tolerance")
{
    const PopulationState s0{100.0, 100.0, 100.0, 100.0};
    const Trajectory truth = integrate_reference(
        SystemVariant::FullNoControl, P1, {}, s0, 0.005, 300.0, 60000);
    const Eigen::Vector4d x_true = truth.back().vec();

    auto err_at = [&](double rel) {
        SolverOptions opts;
        opts.rel_tol = rel;
        opts.abs_tol = rel * 1e-2;
        opts.t_end = 300.0;
        const std::vector<double> grid{300.0};
        const Trajectory traj = integrate(SystemVariant::FullNoControl, P1,
                                          {}, s0, opts, grid);
        REQUIRE(traj.status == SolveStatus::Ok);
        return (traj.back().vec() - x_true).cwiseAbs().maxCoeff() /
               x_true.cwiseAbs().maxCoeff();
    };

    const double loose = err_at(1e-5);
    const double tight = err_at(1e-7);
    CHECK(loose < 1e-2);
    CHECK(tight < loose / 3.0);
    CHECK(tight < 1e-5);
}

TEST_CASE("positivity and absorption bookkeeping")
{
    std::mt19937 rng(555);
    SolverOptions opts;
    opts.t_end = 1000.0;
    for (int trial = 0; trial < 10; ++trial) {
        PopulationState s0 = random_state(rng, 1200.0);
        s0.I = std::min(s0.I, P1.K);
        const Trajectory traj =
            integrate(SystemVariant::FullNoControl, P1, {}, s0, opts);
        REQUIRE(traj.status == SolveStatus::Ok);
        CHECK(traj.stats.clamps == 0);
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            const PopulationState& s = traj.states[i];
            CHECK(s.I >= -opts.abs_tol);
            CHECK(s.Y >= -opts.abs_tol);
            CHECK(s.F >= -opts.abs_tol);
            CHECK(s.M >= -opts.abs_tol);
            CHECK(s.I <= std::max(s0.I, P1.K) + 1e-6);
        }
    }

    // A start above the carrying capacity is pulled back inside.
    const Trajectory high = integrate(
        SystemVariant::FullNoControl, P1, {},
        PopulationState{1500.0, 100.0, 100.0, 100.0}, opts);
    REQUIRE(high.status == SolveStatus::Ok);
    for (const PopulationState& s : high.states) {
        CHECK(s.I <= 1500.0 + 1e-6);
    }
    CHECK(high.back().I < P1.K + 1.0);
}

TEST_CASE("identical inputs give identical trajectories")
{
    SolverOptions opts;
    opts.t_end = 500.0;
    const PopulationState s0{10.0, 20.0, 30.0, 40.0};
    const Trajectory a =
        integrate(SystemVariant::FullControl, P1,
                  ControlSettings{5500.0, 0.1}, s0, opts);
    const Trajectory b =
        integrate(SystemVariant::FullControl, P1,
                  ControlSettings{5500.0, 0.1}, s0, opts);
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        CHECK(a.states[i] == b.states[i]);
        CHECK(a.times[i] == b.times[i]);
    }
}

TEST_CASE("failure paths are reported, not crashed")
{
    SUBCASE("step floor reached")
    {
        SolverOptions opts;
        opts.h_init = 50.0;
        opts.h_min = 50.0;
        opts.h_max = 50.0;
        opts.rel_tol = 1e-13;
        opts.abs_tol = 1e-14;
        opts.t_end = 200.0;
        const Trajectory traj =
            integrate(SystemVariant::FullNoControl, P1, {},
                      PopulationState{100.0, 100.0, 100.0, 100.0}, opts);
        // Either the error control or the Newton loop hits the floor first;
        // both are stiffness failures carrying the partial trajectory.
        const bool failed = traj.status == SolveStatus::StepSizeUnderflow ||
                            traj.status == SolveStatus::NewtonFailure;
        CHECK(failed);
        CHECK_FALSE(traj.states.empty());
        CHECK_FALSE(traj.message.empty());
    }
    SUBCASE("step budget exhausted")
    {
        SolverOptions opts;
        opts.max_steps = 5;
        opts.t_end = 2000.0;
        const Trajectory traj =
            integrate(SystemVariant::FullNoControl, P1, {},
                      PopulationState{100.0, 100.0, 100.0, 100.0}, opts);
        CHECK(traj.status == SolveStatus::MaxStepsExceeded);
    }
}

TEST_CASE("regime crossings")
{
    SUBCASE("abundance-bound solutions never cross")
    {
        SolverOptions opts;
        opts.t_end = 500.0;
        const EquilibriumPoint star = endemic_equilibrium(P1);
        PopulationState s0 = star.state;
        s0.I *= 0.9;
        const Trajectory traj =
            integrate(SystemVariant::FullNoControl, P1, {}, s0, opts);
        CHECK(traj.crossings.empty());
    }
    SUBCASE("scarcity starts escape into abundance")
    {
        SolverOptions opts;
        opts.t_end = 2000.0;
        const Trajectory traj =
            integrate(SystemVariant::FullNoControl, P1, {},
                      PopulationState{0.0, 1000.0, 0.0, 10.0}, opts);
        REQUIRE(traj.status == SolveStatus::Ok);
        REQUIRE_FALSE(traj.crossings.empty());
        CHECK(traj.crossings.front().direction == +1);
    }
    SUBCASE("crossing counts stay finite on random starts")
    {
        std::mt19937 rng(808);
        SolverOptions opts;
        opts.t_end = 2000.0;
        for (int trial = 0; trial < 100; ++trial) {
            const PopulationState s0 = random_state(rng, 2000.0);
            const Trajectory traj =
                integrate(SystemVariant::FullNoControl, P1, {}, s0, opts);
            REQUIRE(traj.status == SolveStatus::Ok);
            CHECK(traj.crossings.size() < 50);
        }
    }
}

}
