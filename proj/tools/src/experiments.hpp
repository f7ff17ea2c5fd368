#ifndef MATDYN_CLI_EXPERIMENTS_HPP
#define MATDYN_CLI_EXPERIMENTS_HPP

#include "config.hpp"

#include "matdyn/equilibria.hpp"
#include "matdyn/integrator.hpp"
#include "matdyn/phase.hpp"
#include "matdyn/thresholds.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace matdyn::cli {

/// Raised when a computation (not the configuration) fails; the CLI maps
/// it to exit code 2 and drops a `.failed` marker next to the outputs.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Executes the configured experiment, writing CSV (and optional SVG)
/// artifacts into config.output.dir. Returns the paths written.
std::vector<std::string> run(const ExperimentConfig& config);

/// Pinned reproduction experiments; each prints its headline values and a
/// PASS/FAIL verdict line to `out` and writes its artifacts. Returns true
/// on PASS. Unknown ids raise ConfigError listing the known ones.
bool run_repro(const std::string& id, const std::string& out_dir, bool svg,
               unsigned workers, std::ostream& out);

const std::vector<std::string>& repro_ids();

/// Deterministic initial-condition set used by the trajectory
/// reproductions: (M, Y+F) anchor pairs expanded by the basin fill rule.
std::vector<PopulationState> repro_initial_conditions(const ModelParameters& p);

// Artifact writers shared between experiments and reproductions.
std::string write_trajectory_csv(const std::string& path,
                                 const Trajectory& traj,
                                 const ModelParameters& p,
                                 const ControlSettings& c);
std::string write_thresholds_csv(const std::string& path,
                                 const std::vector<ThresholdRow>& rows);
std::string write_bifurcation_csv(const std::string& path,
                                  const BifurcationCurve& curve);
std::string write_basins_csv(const std::string& path, const BasinGrid& grid);

} // namespace matdyn::cli

#endif
