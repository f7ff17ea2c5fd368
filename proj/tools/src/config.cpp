#include "config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace matdyn::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw ConfigError("config field '" + path + "': " + what);
}

void expect_keys(const json& obj, const std::string& path,
                 const std::set<std::string>& allowed)
{
    if (!obj.is_object()) {
        fail(path, "expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            fail(path + "." + key, "unknown key");
        }
    }
}

double get_number(const json& obj, const std::string& path,
                  const std::string& key, double fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj[key].is_number()) {
        fail(path + "." + key, "expected a number");
    }
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key,
            int fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj[key].is_number_integer()) {
        fail(path + "." + key, "expected an integer");
    }
    return obj[key].get<int>();
}

bool get_bool(const json& obj, const std::string& path,
              const std::string& key, bool fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj[key].is_boolean()) {
        fail(path + "." + key, "expected a boolean");
    }
    return obj[key].get<bool>();
}

std::string get_string(const json& obj, const std::string& path,
                       const std::string& key, const std::string& fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj[key].is_string()) {
        fail(path + "." + key, "expected a string");
    }
    return obj[key].get<std::string>();
}

std::vector<double> get_number_array(const json& obj, const std::string& path,
                                     const std::string& key,
                                     std::vector<double> fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj[key].is_array()) {
        fail(path + "." + key, "expected an array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : obj[key]) {
        if (!v.is_number()) {
            fail(path + "." + key, "expected an array of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

PopulationState get_state(const json& obj, const std::string& path,
                          const std::string& key,
                          const PopulationState& fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto v = get_number_array(obj, path, key, {});
    if (v.size() != 4) {
        fail(path + "." + key, "expected [I, Y, F, M]");
    }
    return PopulationState{v[0], v[1], v[2], v[3]};
}

ModelParameters parse_parameters(const json& block, const std::string& path)
{
    expect_keys(block, path,
                {"b", "r", "K", "gamma", "mu_I", "mu_Y", "mu_F", "mu_M",
                 "nu_I", "nu_Y", "delta"});
    ModelParameters p; // reference values fill the gaps
    p.b = get_number(block, path, "b", p.b);
    p.r = get_number(block, path, "r", p.r);
    p.K = get_number(block, path, "K", p.K);
    p.gamma = get_number(block, path, "gamma", p.gamma);
    p.mu_I = get_number(block, path, "mu_I", p.mu_I);
    p.mu_Y = get_number(block, path, "mu_Y", p.mu_Y);
    p.mu_F = get_number(block, path, "mu_F", p.mu_F);
    p.mu_M = get_number(block, path, "mu_M", p.mu_M);
    p.nu_I = get_number(block, path, "nu_I", p.nu_I);
    p.nu_Y = get_number(block, path, "nu_Y", p.nu_Y);
    p.delta = get_number(block, path, "delta", p.delta);
    try {
        validate_params(p);
    } catch (const ValidationError& e) {
        fail(path, e.what());
    }
    return p;
}

ExperimentConfig parse_document(const json& doc)
{
    ExperimentConfig config;
    expect_keys(doc, "$",
                {"experiment", "parameters", "control", "solver", "output",
                 "simulate", "thresholds", "bifurcation", "basins",
                 "verify_bounds", "repro", "workers"});

    if (doc.contains("experiment")) {
        const std::string name =
            get_string(doc, "$", "experiment", "");
        const auto kind = experiment_from_string(name);
        if (!kind) {
            fail("$.experiment", "unknown experiment '" + name + "'");
        }
        config.experiment = kind;
    }

    if (doc.contains("parameters")) {
        config.parameters = parse_parameters(doc["parameters"], "parameters");
    }

    if (doc.contains("control")) {
        const json& c = doc["control"];
        expect_keys(c, "control", {"yp", "alpha"});
        config.control.yp = get_number(c, "control", "yp", 0.0);
        config.control.alpha = get_number(c, "control", "alpha", 0.0);
        if (config.control.yp < 0.0) {
            fail("control.yp", "must be nonnegative");
        }
        if (config.control.alpha < 0.0) {
            fail("control.alpha", "must be nonnegative");
        }
    }

    if (doc.contains("solver")) {
        const json& s = doc["solver"];
        expect_keys(s, "solver",
                    {"rel_tol", "abs_tol", "h_init", "h_min", "h_max",
                     "t_end", "max_steps"});
        SolverOptions& o = config.solver;
        o.rel_tol = get_number(s, "solver", "rel_tol", o.rel_tol);
        o.abs_tol = get_number(s, "solver", "abs_tol", o.abs_tol);
        o.h_init = get_number(s, "solver", "h_init", o.h_init);
        o.h_min = get_number(s, "solver", "h_min", o.h_min);
        o.h_max = get_number(s, "solver", "h_max", o.h_max);
        o.t_end = get_number(s, "solver", "t_end", o.t_end);
        o.max_steps = get_int(s, "solver", "max_steps",
                              static_cast<int>(o.max_steps));
        if (!(o.rel_tol > 0.0) || !(o.abs_tol > 0.0)) {
            fail("solver", "tolerances must be positive");
        }
        if (!(0.0 < o.h_min && o.h_min <= o.h_init && o.h_init <= o.h_max)) {
            fail("solver", "steps must satisfy 0 < h_min <= h_init <= h_max");
        }
        if (!(o.t_end > 0.0)) {
            fail("solver.t_end", "must be positive");
        }
    }

    if (doc.contains("output")) {
        const json& o = doc["output"];
        expect_keys(o, "output", {"dir", "svg"});
        config.output.dir = get_string(o, "output", "dir", ".");
        config.output.svg = get_bool(o, "output", "svg", true);
    }

    if (doc.contains("simulate")) {
        const json& s = doc["simulate"];
        expect_keys(s, "simulate", {"initial_state", "samples"});
        config.simulate.initial_state = get_state(
            s, "simulate", "initial_state", config.simulate.initial_state);
        config.simulate.samples =
            get_int(s, "simulate", "samples", config.simulate.samples);
        if (config.simulate.samples < 2) {
            fail("simulate.samples", "need at least 2 samples");
        }
    }

    if (doc.contains("thresholds")) {
        const json& t = doc["thresholds"];
        expect_keys(t, "thresholds", {"alpha_grid"});
        config.thresholds.alpha_grid = get_number_array(
            t, "thresholds", "alpha_grid", config.thresholds.alpha_grid);
        for (double a : config.thresholds.alpha_grid) {
            if (!(a >= 0.0) || !std::isfinite(a)) {
                fail("thresholds.alpha_grid",
                     "entries must be finite and nonnegative");
            }
        }
    }

    if (doc.contains("bifurcation")) {
        const json& b = doc["bifurcation"];
        expect_keys(b, "bifurcation",
                    {"alpha", "yp_grid", "yp_min", "yp_max", "yp_count"});
        BifurcationSettings& s = config.bifurcation;
        s.alpha = get_number(b, "bifurcation", "alpha", s.alpha);
        s.yp_grid = get_number_array(b, "bifurcation", "yp_grid", {});
        s.yp_min = get_number(b, "bifurcation", "yp_min", s.yp_min);
        s.yp_max = get_number(b, "bifurcation", "yp_max", s.yp_max);
        s.yp_count = get_int(b, "bifurcation", "yp_count", s.yp_count);
        for (std::size_t i = 1; i < s.yp_grid.size(); ++i) {
            if (!(s.yp_grid[i] > s.yp_grid[i - 1])) {
                fail("bifurcation.yp_grid", "must be positive ascending");
            }
        }
        if (!s.yp_grid.empty() && !(s.yp_grid.front() > 0.0)) {
            fail("bifurcation.yp_grid", "must be positive ascending");
        }
    }

    if (doc.contains("basins")) {
        const json& b = doc["basins"];
        expect_keys(b, "basins", {"m_max", "yf_max", "rows", "cols"});
        BasinSettings& s = config.basins;
        s.m_max = get_number(b, "basins", "m_max", s.m_max);
        s.yf_max = get_number(b, "basins", "yf_max", s.yf_max);
        s.rows = get_int(b, "basins", "rows", s.rows);
        s.cols = get_int(b, "basins", "cols", s.cols);
        if (s.rows < 2 || s.cols < 2 ||
            static_cast<long>(s.rows) * s.cols > 1'000'000) {
            fail("basins", "resolution must be between 2x2 and 10^6 cells");
        }
    }

    if (doc.contains("verify_bounds")) {
        const json& v = doc["verify_bounds"];
        expect_keys(v, "verify_bounds", {"initial_state", "t_end", "samples"});
        VerifyBoundsSettings& s = config.verify_bounds;
        s.initial_state =
            get_state(v, "verify_bounds", "initial_state", s.initial_state);
        s.t_end = get_number(v, "verify_bounds", "t_end", s.t_end);
        s.samples = get_int(v, "verify_bounds", "samples", s.samples);
    }

    if (doc.contains("repro")) {
        const json& r = doc["repro"];
        expect_keys(r, "repro", {"id"});
        config.repro_id = get_string(r, "repro", "id", "");
    }

    const int workers = get_int(doc, "$", "workers", 0);
    if (workers < 0) {
        fail("$.workers", "must be nonnegative");
    }
    config.workers = static_cast<unsigned>(workers);

    return config;
}

} // namespace

const char* to_string(ExperimentKind k)
{
    switch (k) {
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::Equilibria: return "equilibria";
    case ExperimentKind::Thresholds: return "thresholds";
    case ExperimentKind::Bifurcation: return "bifurcation";
    case ExperimentKind::Basins: return "basins";
    case ExperimentKind::VerifyBounds: return "verify-bounds";
    case ExperimentKind::Repro: return "repro";
    }
    return "?";
}

std::optional<ExperimentKind> experiment_from_string(const std::string& s)
{
    if (s == "simulate") return ExperimentKind::Simulate;
    if (s == "equilibria") return ExperimentKind::Equilibria;
    if (s == "thresholds") return ExperimentKind::Thresholds;
    if (s == "bifurcation") return ExperimentKind::Bifurcation;
    if (s == "basins") return ExperimentKind::Basins;
    if (s == "verify-bounds") return ExperimentKind::VerifyBounds;
    if (s == "repro") return ExperimentKind::Repro;
    return std::nullopt;
}

ExperimentConfig parse_config(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_document(doc);
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string write_config(const ExperimentConfig& config)
{
    json doc;
    if (config.experiment) {
        doc["experiment"] = to_string(*config.experiment);
    }
    const ModelParameters& p = config.parameters;
    doc["parameters"] = {
        {"b", p.b},       {"r", p.r},       {"K", p.K},
        {"gamma", p.gamma}, {"mu_I", p.mu_I}, {"mu_Y", p.mu_Y},
        {"mu_F", p.mu_F}, {"mu_M", p.mu_M}, {"nu_I", p.nu_I},
        {"nu_Y", p.nu_Y}, {"delta", p.delta},
    };
    doc["control"] = {{"yp", config.control.yp},
                      {"alpha", config.control.alpha}};
    const SolverOptions& o = config.solver;
    doc["solver"] = {
        {"rel_tol", o.rel_tol}, {"abs_tol", o.abs_tol},
        {"h_init", o.h_init},   {"h_min", o.h_min},
        {"h_max", o.h_max},     {"t_end", o.t_end},
        {"max_steps", static_cast<int>(o.max_steps)},
    };
    doc["output"] = {{"dir", config.output.dir}, {"svg", config.output.svg}};
    doc["simulate"] = {
        {"initial_state",
         {config.simulate.initial_state.I, config.simulate.initial_state.Y,
          config.simulate.initial_state.F, config.simulate.initial_state.M}},
        {"samples", config.simulate.samples},
    };
    doc["thresholds"] = {{"alpha_grid", config.thresholds.alpha_grid}};
    doc["bifurcation"] = {
        {"alpha", config.bifurcation.alpha},
        {"yp_grid", config.bifurcation.yp_grid},
        {"yp_min", config.bifurcation.yp_min},
        {"yp_max", config.bifurcation.yp_max},
        {"yp_count", config.bifurcation.yp_count},
    };
    doc["basins"] = {
        {"m_max", config.basins.m_max},
        {"yf_max", config.basins.yf_max},
        {"rows", config.basins.rows},
        {"cols", config.basins.cols},
    };
    doc["verify_bounds"] = {
        {"initial_state",
         {config.verify_bounds.initial_state.I,
          config.verify_bounds.initial_state.Y,
          config.verify_bounds.initial_state.F,
          config.verify_bounds.initial_state.M}},
        {"t_end", config.verify_bounds.t_end},
        {"samples", config.verify_bounds.samples},
    };
    if (!config.repro_id.empty()) {
        doc["repro"] = {{"id", config.repro_id}};
    }
    doc["workers"] = config.workers;
    return doc.dump(2);
}

} // namespace matdyn::cli
