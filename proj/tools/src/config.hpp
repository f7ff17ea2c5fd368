#ifndef MATDYN_CLI_CONFIG_HPP
#define MATDYN_CLI_CONFIG_HPP

#include "matdyn/integrator.hpp"
#include "matdyn/parameters.hpp"
#include "matdyn/phase.hpp"
#include "matdyn/types.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace matdyn::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    Simulate,
    Equilibria,
    Thresholds,
    Bifurcation,
    Basins,
    VerifyBounds,
    Repro,
};

const char* to_string(ExperimentKind k);
std::optional<ExperimentKind> experiment_from_string(const std::string& s);

struct SimulateSettings {
    PopulationState initial_state{100.0, 100.0, 100.0, 100.0};
    int samples = 400;
};

struct ThresholdSettings {
    std::vector<double> alpha_grid{0.0, 0.1};
};

struct BifurcationSettings {
    double alpha = 0.0;
    std::vector<double> yp_grid; // explicit grid wins over the span below
    double yp_min = 100.0;
    double yp_max = 0.0; // 0: derive from the fold lure
    int yp_count = 60;
};

struct BasinSettings {
    double m_max = 50.0;
    double yf_max = 50.0;
    int rows = 50;
    int cols = 50;
};

struct VerifyBoundsSettings {
    PopulationState initial_state{500.0, 200.0, 700.0, 800.0};
    double t_end = 2000.0;
    int samples = 512;
};

struct OutputSettings {
    std::string dir = ".";
    bool svg = true;
};

struct ExperimentConfig {
    std::optional<ExperimentKind> experiment;
    ModelParameters parameters;
    ControlSettings control;
    SolverOptions solver;
    OutputSettings output;
    SimulateSettings simulate;
    ThresholdSettings thresholds;
    BifurcationSettings bifurcation;
    BasinSettings basins;
    VerifyBoundsSettings verify_bounds;
    std::string repro_id;
    unsigned workers = 0; // 0: machine parallelism
};

/// Parses and validates a JSON config file. Unknown keys are rejected
/// with their path; type errors name the offending field; an omitted
/// parameters block falls back to the reference values. Parameter
/// invariants are checked here so computations never see invalid input.
ExperimentConfig load_config(const std::string& path);

/// Same, from an in-memory JSON document (used by tests and round trips).
ExperimentConfig parse_config(const std::string& json_text);

/// Serialises a config back to JSON (round-trip partner of parse_config).
std::string write_config(const ExperimentConfig& config);

} // namespace matdyn::cli

#endif
