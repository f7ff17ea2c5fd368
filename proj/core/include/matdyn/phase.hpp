#ifndef MATDYN_PHASE_HPP
#define MATDYN_PHASE_HPP

#include "matdyn/equilibria.hpp"
#include "matdyn/integrator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace matdyn {

struct AttractorOptions {
    double proximity_rel = 1e-3; // relative distance counting as "at" a point
    double dwell_days = 50.0;    // how long the state must stay there
    double sample_spacing = 5.0; // days between convergence checks
};

struct AttractorResult {
    std::optional<EquilibriumLabel> label; // nullopt: nonconvergent
    double reached_at = 0.0;
    std::string diagnostic;
};

/// Integrates the full control model from s0 and reports which catalog
/// equilibrium the solution settles at: within proximity_rel (relative to
/// the equilibrium scale) for dwell_days of simulated time. Integration
/// failures and runs that never settle are Nonconvergent.
AttractorResult classify_attractor(const ModelParameters& p,
                                   const ControlSettings& c,
                                   const std::vector<EquilibriumPoint>& catalog,
                                   const PopulationState& s0,
                                   const SolverOptions& opts,
                                   const AttractorOptions& aopts = {});

/// Two-axis slice of initial-condition space. MalesVsFemales is the plane
/// (M, Y+F) with the remaining coordinates filled by a fixed rule: Y:F
/// split at the endemic ratio Y*/(Y*+F*) and I = (M + Y+F) * I*/(Y*+F*+M*).
/// RawPair varies two raw state coordinates around a base state.
struct BasinGridSpec {
    enum class Mode { MalesVsFemales, RawPair };
    Mode mode = Mode::MalesVsFemales;
    double min1 = 0.0, max1 = 50.0;
    double min2 = 0.0, max2 = 50.0;
    int n1 = 50, n2 = 50;
    int coord1 = 3, coord2 = 1; // RawPair only
    PopulationState base;       // RawPair only

    static BasinGridSpec males_vs_females(double m_max, double s_max, int n1,
                                          int n2);
};

struct BasinGrid {
    BasinGridSpec spec;
    /// Row-major (axis1 outer), nullopt = nonconvergent.
    std::vector<std::optional<EquilibriumLabel>> labels;
    double nonconvergent_fraction = 0.0;

    std::size_t count(EquilibriumLabel l) const;
    double coord1(int i) const;
    double coord2(int j) const;
};

/// State injected for one grid cell under the spec's fill rule.
PopulationState basin_cell_state(const BasinGridSpec& spec,
                                 const ModelParameters& p, double c1,
                                 double c2);

/// Attractor label for every cell of the grid; cells are classified
/// independently and in parallel over `workers` threads, merged by index.
BasinGrid basin_grid(const ModelParameters& p, const ControlSettings& c,
                     const BasinGridSpec& spec, const SolverOptions& opts,
                     unsigned workers = 0,
                     const AttractorOptions& aopts = {});

struct BifurcationRow {
    double yp = 0.0;
    EquilibriumLabel label = EquilibriumLabel::TE;
    double yf_value = 0.0; // Y + F at the equilibrium
    StabilityLabel stability = StabilityLabel::NotClassified;
};

struct BifurcationCurve {
    std::vector<BifurcationRow> rows;
};

/// (Y+F) of every full-model equilibrium as Y_P sweeps the grid; rows are
/// exactly the equilibrium_catalog output, no independent root finding.
BifurcationCurve bifurcation_curve(const ModelParameters& p, double alpha,
                                   std::span<const double> yp_grid);

struct BoundReport {
    bool holds = true;
    double first_violation_time = 0.0;
    int component = -1;
    double max_excess = 0.0; // worst violation margin, 0 when holds
    SolveStatus full_status = SolveStatus::Ok;
    SolveStatus aux_status = SolveStatus::Ok;
};

/// Integrates the full control system and the auxiliary monotone system
/// from the same initial state on a shared grid and checks the
/// componentwise ordering full <= aux + tol*(1 + |state|) everywhere.
BoundReport verify_comparison_bound(const ModelParameters& p,
                                    const ControlSettings& c,
                                    const PopulationState& s0, double t_end,
                                    int samples = 512, double tol = 1e-6);

} // namespace matdyn

#endif
