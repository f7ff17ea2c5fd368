#include "experiments.hpp"

#include "csv.hpp"
#include "svg.hpp"

#include "matdyn/reproduction.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

namespace matdyn::cli {

namespace fs = std::filesystem;

namespace {

std::string out_path(const ExperimentConfig& config, const std::string& name)
{
    fs::create_directories(config.output.dir);
    return (fs::path(config.output.dir) / name).string();
}

std::vector<double> sample_grid(double t_end, int samples)
{
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        grid.push_back(t_end * i / (samples - 1.0));
    }
    return grid;
}

SvgPlot::Points phase_points(const Trajectory& traj)
{
    SvgPlot::Points pts;
    pts.reserve(traj.states.size());
    for (const PopulationState& s : traj.states) {
        pts.emplace_back(s.M, s.Y + s.F);
    }
    return pts;
}

std::vector<std::string> run_simulate(const ExperimentConfig& config)
{
    const auto grid =
        sample_grid(config.solver.t_end, config.simulate.samples);
    const Trajectory traj =
        integrate(SystemVariant::FullControl, config.parameters,
                  config.control, config.simulate.initial_state,
                  config.solver, grid);
    if (traj.status != SolveStatus::Ok) {
        throw NumericalFailure(std::string("integration failed: ") +
                               to_string(traj.status) + " (" + traj.message +
                               ")");
    }

    std::vector<std::string> artifacts;
    artifacts.push_back(write_trajectory_csv(
        out_path(config, "trajectory.csv"), traj, config.parameters,
        config.control));

    if (config.output.svg) {
        SvgPlot phase("Trajectory", "M", "Y + F");
        phase.line(phase_points(traj), "#1f77b4", false, "trajectory");
        phase.scatter({{traj.states.front().M,
                        traj.states.front().Y + traj.states.front().F}},
                      "#222222", 4.0, "start");
        const std::string p1 = out_path(config, "trajectory_phase.svg");
        phase.write(p1);
        artifacts.push_back(p1);

        SvgPlot time_plot("Compartments over time", "t (days)", "count");
        SvgPlot::Points pi, py, pf, pm;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            pi.emplace_back(traj.times[i], traj.states[i].I);
            py.emplace_back(traj.times[i], traj.states[i].Y);
            pf.emplace_back(traj.times[i], traj.states[i].F);
            pm.emplace_back(traj.times[i], traj.states[i].M);
        }
        time_plot.line(pi, "#1f77b4", false, "I");
        time_plot.line(py, "#ff7f0e", false, "Y");
        time_plot.line(pf, "#2ca02c", false, "F");
        time_plot.line(pm, "#d62728", false, "M");
        const std::string p2 = out_path(config, "trajectory_time.svg");
        time_plot.write(p2);
        artifacts.push_back(p2);
    }
    return artifacts;
}

std::vector<std::string> run_equilibria(const ExperimentConfig& config)
{
    const CatalogReport cat =
        equilibrium_catalog(config.parameters, config.control);
    CsvWriter csv(out_path(config, "equilibria.csv"),
                  {"label", "I", "Y", "F", "M", "region", "stability",
                   "residual", "admissible"});
    auto emit = [&](const EquilibriumPoint& eq, bool admissible_col) {
        csv.row({to_string(eq.label), format_full(eq.state.I),
                 format_full(eq.state.Y), format_full(eq.state.F),
                 format_full(eq.state.M), to_string(eq.region),
                 to_string(eq.stability), format_full(eq.residual),
                 admissible_col ? "1" : "0"});
    };
    for (const EquilibriumPoint& eq : cat.equilibria) {
        emit(eq, true);
    }
    for (const EquilibriumPoint& eq : cat.candidates) {
        if (!eq.admissible_full_model) {
            emit(eq, false);
        }
    }
    return {out_path(config, "equilibria.csv")};
}

std::vector<std::string> run_thresholds(const ExperimentConfig& config)
{
    const auto rows =
        threshold_sweep(config.parameters, config.thresholds.alpha_grid);
    bool any_ok = false;
    for (const ThresholdRow& r : rows) {
        any_ok = any_ok || r.ok;
    }
    std::vector<std::string> artifacts;
    artifacts.push_back(
        write_thresholds_csv(out_path(config, "thresholds.csv"), rows));
    if (!any_ok) {
        throw NumericalFailure("threshold sweep failed on every row");
    }

    if (config.output.svg) {
        SvgPlot plot("Control thresholds vs trapping rate", "alpha",
                     "lure strength (equivalent females)");
        SvgPlot::Points star, dstar, tilde;
        for (const ThresholdRow& r : rows) {
            if (!r.ok) {
                continue;
            }
            star.emplace_back(r.alpha, r.yp_star);
            dstar.emplace_back(r.alpha, r.yp_dstar);
            tilde.emplace_back(r.alpha, r.yp_dstar_tilde);
        }
        plot.line(star, "#1f77b4", false, "critical lure");
        plot.line(dstar, "#d62728", false, "fold lure");
        plot.line(tilde, "#2ca02c", true, "auxiliary fold lure");
        const std::string p = out_path(config, "thresholds.svg");
        plot.write(p);
        artifacts.push_back(p);
    }
    return artifacts;
}

std::vector<double> bifurcation_grid(const ExperimentConfig& config)
{
    const BifurcationSettings& s = config.bifurcation;
    if (!s.yp_grid.empty()) {
        return s.yp_grid;
    }
    double hi = s.yp_max;
    if (!(hi > 0.0)) {
        const TangencySolve fold =
            yp_double_star(config.parameters, s.alpha, TangencyCurve::Psi);
        hi = 1.05 * fold.value;
    }
    const double lo = std::max(s.yp_min, 1e-6 * hi);
    std::vector<double> grid;
    const int n_log = std::max(2, s.yp_count - s.yp_count / 5);
    for (int i = 0; i < n_log; ++i) {
        grid.push_back(lo * std::pow(0.95 * hi / lo,
                                     i / static_cast<double>(n_log - 1)));
    }
    // Extra resolution through the fold.
    const int n_lin = std::max(2, s.yp_count / 5);
    for (int i = 0; i <= n_lin; ++i) {
        grid.push_back(0.95 * hi + (hi - 0.95 * hi) * i /
                                       static_cast<double>(n_lin));
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

std::vector<std::string> run_bifurcation(const ExperimentConfig& config)
{
    const std::vector<double> grid = bifurcation_grid(config);
    const BifurcationCurve curve =
        bifurcation_curve(config.parameters, config.bifurcation.alpha, grid);

    std::vector<std::string> artifacts;
    artifacts.push_back(
        write_bifurcation_csv(out_path(config, "bifurcation.csv"), curve));

    if (config.output.svg) {
        SvgPlot plot("Equilibrium females vs lure strength", "Y_P", "Y + F");
        std::map<std::pair<EquilibriumLabel, StabilityLabel>, SvgPlot::Points>
            branches;
        for (const BifurcationRow& row : curve.rows) {
            branches[{row.label, row.stability}].emplace_back(row.yp,
                                                              row.yf_value);
        }
        const std::map<EquilibriumLabel, std::string> colors{
            {EquilibriumLabel::TE, "#555555"},
            {EquilibriumLabel::EE_sharp, "#1f77b4"},
            {EquilibriumLabel::EE_MD1, "#d62728"},
            {EquilibriumLabel::EE_MD2, "#2ca02c"},
        };
        for (auto& [key, pts] : branches) {
            std::sort(pts.begin(), pts.end());
            const auto color_it = colors.find(key.first);
            const std::string color =
                color_it == colors.end() ? "#9467bd" : color_it->second;
            const bool dashed =
                key.second != StabilityLabel::AsymptoticallyStable;
            plot.line(pts, color, dashed,
                      std::string(to_string(key.first)) +
                          (dashed ? " (unstable)" : " (stable)"));
        }
        const std::string p = out_path(config, "bifurcation.svg");
        plot.write(p);
        artifacts.push_back(p);
    }
    return artifacts;
}

std::vector<std::string> run_basins(const ExperimentConfig& config)
{
    const BasinSettings& s = config.basins;
    const BasinGridSpec spec = BasinGridSpec::males_vs_females(
        s.m_max, s.yf_max, s.rows, s.cols);
    const BasinGrid grid =
        basin_grid(config.parameters, config.control, spec, config.solver,
                   config.workers);

    std::vector<std::string> artifacts;
    artifacts.push_back(
        write_basins_csv(out_path(config, "basins.csv"), grid));

    if (config.output.svg) {
        SvgPlot plot("Basins of attraction", "M", "Y + F");
        std::map<std::string, SvgPlot::Points> buckets;
        for (int i = 0; i < spec.n1; ++i) {
            for (int j = 0; j < spec.n2; ++j) {
                const auto& label = grid.labels[i * spec.n2 + j];
                const std::string key =
                    label ? to_string(*label) : "nonconvergent";
                buckets[key].emplace_back(grid.coord1(i), grid.coord2(j));
            }
        }
        const std::map<std::string, std::string> colors{
            {"TE", "#d62728"},
            {"EE#", "#1f77b4"},
            {"EE_MD2", "#2ca02c"},
            {"EE*", "#1f77b4"},
            {"nonconvergent", "#aaaaaa"},
        };
        for (const auto& [key, pts] : buckets) {
            const auto it = colors.find(key);
            plot.scatter(pts, it == colors.end() ? "#9467bd" : it->second,
                         2.6, key);
        }
        const std::string p = out_path(config, "basins.svg");
        plot.write(p);
        artifacts.push_back(p);
    }

    if (grid.nonconvergent_fraction > 0.5) {
        throw NumericalFailure("more than half of the basin cells failed to "
                               "classify");
    }
    return artifacts;
}

std::vector<std::string> run_verify_bounds(const ExperimentConfig& config)
{
    const VerifyBoundsSettings& s = config.verify_bounds;
    const BoundReport report = verify_comparison_bound(
        config.parameters, config.control, s.initial_state, s.t_end,
        s.samples);
    if (report.full_status != SolveStatus::Ok ||
        report.aux_status != SolveStatus::Ok) {
        throw NumericalFailure("bound verification could not integrate both "
                               "systems");
    }

    CsvWriter csv(out_path(config, "bound_report.csv"),
                  {"holds", "first_violation_time", "component",
                   "max_excess"});
    csv.row({report.holds ? "1" : "0",
             format_full(report.first_violation_time),
             std::to_string(report.component), format_full(report.max_excess)});
    return {out_path(config, "bound_report.csv")};
}

} // namespace

std::string write_trajectory_csv(const std::string& path,
                                 const Trajectory& traj,
                                 const ModelParameters& p,
                                 const ControlSettings& c)
{
    CsvWriter csv(path, {"t", "I", "Y", "F", "M", "regime"});
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const PopulationState& s = traj.states[i];
        csv.row({format_full(traj.times[i]), format_full(s.I),
                 format_full(s.Y), format_full(s.F), format_full(s.M),
                 to_string(classify_regime(p, c, s))});
    }
    return path;
}

std::string write_thresholds_csv(const std::string& path,
                                 const std::vector<ThresholdRow>& rows)
{
    CsvWriter csv(path, {"alpha", "yp_star", "yp_dstar", "yp_dstar_tilde",
                         "tangency_I"});
    for (const ThresholdRow& r : rows) {
        if (!r.ok) {
            csv.row({format_full(r.alpha), "nan", "nan", "nan", "nan"});
            continue;
        }
        csv.row({format_full(r.alpha), format_full(r.yp_star),
                 format_full(r.yp_dstar), format_full(r.yp_dstar_tilde),
                 format_full(r.tangency_I)});
    }
    return path;
}

std::string write_bifurcation_csv(const std::string& path,
                                  const BifurcationCurve& curve)
{
    CsvWriter csv(path, {"yp", "label", "yf_value", "stability"});
    for (const BifurcationRow& row : curve.rows) {
        csv.row({format_full(row.yp), to_string(row.label),
                 format_full(row.yf_value), to_string(row.stability)});
    }
    return path;
}

std::string write_basins_csv(const std::string& path, const BasinGrid& grid)
{
    CsvWriter csv(path, {"coord1", "coord2", "label"});
    for (int i = 0; i < grid.spec.n1; ++i) {
        for (int j = 0; j < grid.spec.n2; ++j) {
            const auto& label = grid.labels[i * grid.spec.n2 + j];
            csv.row({format_full(grid.coord1(i)), format_full(grid.coord2(j)),
                     label ? to_string(*label) : "nonconvergent"});
        }
    }
    return path;
}

std::vector<std::string> run(const ExperimentConfig& config)
{
    if (!config.experiment) {
        throw ConfigError("no experiment selected");
    }
    switch (*config.experiment) {
    case ExperimentKind::Simulate: return run_simulate(config);
    case ExperimentKind::Equilibria: return run_equilibria(config);
    case ExperimentKind::Thresholds: return run_thresholds(config);
    case ExperimentKind::Bifurcation: return run_bifurcation(config);
    case ExperimentKind::Basins: return run_basins(config);
    case ExperimentKind::VerifyBounds: return run_verify_bounds(config);
    case ExperimentKind::Repro:
        throw ConfigError("repro runs through the repro entry point");
    }
    return {};
}

} // namespace matdyn::cli
