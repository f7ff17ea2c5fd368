#include "config.hpp"
#include "experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace matdyn::cli;

constexpr const char* kSchemaHelp = R"(Output column schemas:
  trajectory.csv   t, I, Y, F, M, regime
  thresholds.csv   alpha, yp_star, yp_dstar, yp_dstar_tilde, tangency_I
  bifurcation.csv  yp, label, yf_value, stability
  basins.csv       coord1 (M), coord2 (Y+F), label
  equilibria.csv   label, I, Y, F, M, region, stability, residual, admissible
Numbers are written with 17 significant digits. Exit codes: 0 success,
1 configuration error, 2 numerical failure.)";

void drop_failed_marker(const std::string& dir, const std::string& what)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::ofstream marker(std::filesystem::path(dir) / (what + ".failed"));
    marker << what << " failed; see stderr\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pest-population control analysis: simulation, equilibria, "
                 "thresholds, bifurcation, basins."};
    app.footer(kSchemaHelp);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    unsigned workers = 0;
    bool no_svg = false;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        sub->add_option("--config", config_path, "JSON experiment config")
            ->required(config_required);
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--workers", workers,
                        "worker threads for grids (0 = all cores)");
        sub->add_flag("--no-svg", no_svg, "skip SVG artifacts");
    };

    const std::pair<const char*, ExperimentKind> kinds[] = {
        {"simulate", ExperimentKind::Simulate},
        {"equilibria", ExperimentKind::Equilibria},
        {"thresholds", ExperimentKind::Thresholds},
        {"bifurcation", ExperimentKind::Bifurcation},
        {"basins", ExperimentKind::Basins},
        {"verify-bounds", ExperimentKind::VerifyBounds},
    };
    for (const auto& [name, kind] : kinds) {
        (void)kind;
        CLI::App* sub = app.add_subcommand(
            name, std::string("run the ") + name + " experiment");
        add_common(sub, true);
    }

    std::string repro_id;
    CLI::App* repro = app.add_subcommand(
        "repro", "reproduce a pinned experiment and report PASS/FAIL");
    repro->add_option("id", repro_id, "experiment id (or set repro.id in the "
                                      "config)");
    add_common(repro, false);

    CLI11_PARSE(app, argc, argv);

    const CLI::App* sub = app.get_subcommands().front();
    const std::string sub_name = sub->get_name();

    try {
        ExperimentConfig config;
        if (!config_path.empty()) {
            config = load_config(config_path);
        }
        if (!out_dir.empty()) {
            config.output.dir = out_dir;
        }
        if (workers != 0) {
            config.workers = workers;
        }
        if (no_svg) {
            config.output.svg = false;
        }

        if (sub_name == "repro") {
            std::string id = repro_id.empty() ? config.repro_id : repro_id;
            if (id.empty()) {
                throw ConfigError(
                    "repro needs an id argument or repro.id in the config");
            }
            const bool pass = run_repro(id, config.output.dir,
                                        config.output.svg, config.workers,
                                        std::cout);
            return pass ? 0 : 2;
        }

        const auto kind = experiment_from_string(sub_name);
        if (config.experiment && *config.experiment != *kind) {
            throw ConfigError("config experiment '" +
                              std::string(to_string(*config.experiment)) +
                              "' does not match subcommand '" + sub_name +
                              "'");
        }
        config.experiment = kind;

        const auto artifacts = run(config);
        for (const std::string& path : artifacts) {
            std::cout << "wrote " << path << "\n";
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        drop_failed_marker(out_dir.empty() ? "." : out_dir, sub_name);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        drop_failed_marker(out_dir.empty() ? "." : out_dir, sub_name);
        return 2;
    }
}
