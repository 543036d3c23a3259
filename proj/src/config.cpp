#include "slfv/config.hpp"

#include "slfv/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slfv {

namespace {

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("not a boolean: " + v);
}

std::vector<double> parse_double_list(const std::string& v) {
    std::vector<double> out;
    for (const auto& piece : split(v, ',')) {
        if (piece.empty()) continue;
        out.push_back(std::stod(piece));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& v) {
    std::vector<int> out;
    for (const auto& piece : split(v, ',')) {
        if (piece.empty()) continue;
        out.push_back(std::stoi(piece));
    }
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

void set_key(ExperimentConfig& cfg, const std::string& section, const std::string& key,
             const std::string& value) {
    auto bad = [&]() {
        throw std::invalid_argument("unknown config key: " + section + "." + key);
    };
    ModelParams& p = cfg.params;
    GrowthSpec& g = p.growth;
    if (section == "model") {
        if (key == "u") p.u = std::stod(value);
        else if (key == "mu") p.mu = std::stod(value);
        else if (key == "R") p.R = std::stoi(value);
        else if (key == "n_max") {
            if (value == "auto") {
                cfg.n_max_auto = true;
                p.n_max = 0.0;
            } else {
                cfg.n_max_auto = false;
                p.n_max = std::stod(value);
            }
        } else if (key == "grid_len") p.grid_len = std::stoi(value);
        else if (key == "boundary") {
            if (value == "clip") p.boundary = Boundary::clip;
            else if (value == "wrap") p.boundary = Boundary::wrap;
            else throw std::invalid_argument("boundary must be clip or wrap");
        } else if (key == "d") p.d = std::stoi(value);
        else if (key == "growth") {
            if (value == "valley") g.family = GrowthFamily::valley;
            else if (value == "logistic_const") g.family = GrowthFamily::logistic_const;
            else if (value == "custom_table") g.family = GrowthFamily::custom_table;
            else throw std::invalid_argument("unknown growth family: " + value);
        } else if (key == "valley_a") g.valley_a = std::stod(value);
        else if (key == "valley_c") g.valley_c = std::stod(value);
        else if (key == "valley_s") g.valley_s = std::stod(value);
        else if (key == "valley_m") g.valley_m = std::stod(value);
        else if (key == "valley_b") g.valley_b = std::stod(value);
        else if (key == "kappa") g.kappa = std::stod(value);
        else if (key == "table_intercept") g.table_intercept = parse_double_list(value);
        else if (key == "table_slope") g.table_slope = parse_double_list(value);
        else bad();
    } else if (section == "sim") {
        if (key == "T_end") cfg.T_end = std::stod(value);
        else if (key == "initial_mass") cfg.initial_mass = std::stod(value);
        else if (key == "initial_state") {
            if (value == "all_uniform_pool") cfg.initial_state = InitialState::all_uniform_pool;
            else if (value == "one_type_per_site") cfg.initial_state = InitialState::one_type_per_site;
            else if (value == "snapshot_file") cfg.initial_state = InitialState::snapshot_file;
            else throw std::invalid_argument("unknown initial_state: " + value);
        } else if (key == "snapshot_path") cfg.snapshot_path = value;
        else if (key == "type_capacity") cfg.type_capacity = std::stoi(value);
        else if (key == "record_events") cfg.record_events = parse_bool(value);
        else bad();
    } else if (section == "predict") {
        if (key == "t_max") cfg.predict.t_max = std::stoi(value);
        else if (key == "rate_scale") cfg.predict.rate_scale = std::stod(value);
        else if (key == "N") cfg.predict.N = std::stod(value);
        else if (key == "delta") cfg.predict.delta = std::stod(value);
        else if (key == "wmf_prefactor") cfg.predict.wmf_prefactor = parse_bool(value);
        else if (key == "bc_value") cfg.predict.pde.bc_value = std::stod(value);
        else if (key == "tol_steady") cfg.predict.pde.tol_steady = std::stod(value);
        else if (key == "dt") cfg.predict.pde.dt = (value == "auto") ? 0.0 : std::stod(value);
        else if (key == "max_steps") cfg.predict.pde.max_steps = std::stol(value);
        else if (key == "reaction_scale") {
            if (value == "with_uVR") cfg.predict.pde.reaction_scale = ReactionScale::with_uVR;
            else if (value == "without_uVR") cfg.predict.pde.reaction_scale = ReactionScale::without_uVR;
            else throw std::invalid_argument("reaction_scale must be with_uVR or without_uVR");
        } else bad();
    } else if (section == "analysis") {
        if (key == "reference_sites") cfg.analysis.reference_sites = parse_int_list(value);
        else if (key == "replicates") cfg.analysis.replicates = std::stoi(value);
        else if (key == "qv_horizon") cfg.analysis.qv_horizon = std::stod(value);
        else if (key == "qv_replicates") cfg.analysis.qv_replicates = std::stoi(value);
        else bad();
    } else if (section == "io") {
        if (key == "out_dir") cfg.io.out_dir = value;
        else if (key == "write_snapshots") cfg.io.write_snapshots = parse_bool(value);
        else bad();
    } else if (section == "rng") {
        if (key == "seed") cfg.seed = std::stoull(value);
        else bad();
    } else {
        throw std::invalid_argument("unknown config section: " + section);
    }
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("malformed section at line " + std::to_string(lineno));
            section = line.substr(1, line.size() - 2);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("expected key=value at line " + std::to_string(lineno));
        if (section.empty())
            throw std::invalid_argument("key outside any section at line " + std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            set_key(cfg, section, key, value);
        } catch (const std::exception& e) {
            std::string msg = e.what();
            if (msg.find(section) != std::string::npos) throw; // already contextual
            throw std::invalid_argument("bad value for " + section + "." + key + ": " + msg);
        }
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must look like section.key=value: " + assignment);
    std::string path = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);
    auto dot = path.find('.');
    if (dot == std::string::npos)
        throw std::invalid_argument("override key needs a section prefix: " + assignment);
    std::string section = path.substr(0, dot), key = path.substr(dot + 1);
    try {
        set_key(cfg, section, key, value);
    } catch (const std::exception& e) {
        std::string msg = e.what();
        if (msg.find(section) != std::string::npos) throw;
        throw std::invalid_argument("bad value for " + section + "." + key + ": " + msg);
    }
}

void ExperimentConfig::finalize() {
    if (params.growth.family == GrowthFamily::custom_table &&
        params.growth.table_intercept.empty() && params.growth.table_slope.empty()) {
        params.growth = GrowthSpec::zero(params.grid_len);
        params.growth.family = GrowthFamily::custom_table;
    }
    if (n_max_auto && params.n_max <= 0.0) params.n_max = suggest_n_max(params);
    params.validate();
    if (analysis.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    for (int r : analysis.reference_sites)
        if (r < 0 || r >= params.grid_len)
            throw std::invalid_argument("reference site outside the grid");
    if (predict.t_max < 1) throw std::invalid_argument("predict.t_max must be >= 1");
}

SimConfig ExperimentConfig::make_sim_config() const {
    SimConfig sc;
    sc.params = params;
    sc.T_end = T_end;
    sc.seed = seed;
    sc.initial_mass = initial_mass;
    sc.initial_state = initial_state;
    sc.snapshot_path = snapshot_path;
    sc.type_capacity = type_capacity;
    sc.record_events = record_events;
    return sc;
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream s;
    const ModelParams& p = params;
    const GrowthSpec& g = p.growth;
    auto num = [](double v) { return format_g17(v); };
    s << "model.u=" << num(p.u) << "\n";
    s << "model.mu=" << num(p.mu) << "\n";
    s << "model.R=" << p.R << "\n";
    s << "model.n_max=" << num(p.n_max) << "\n";
    s << "model.grid_len=" << p.grid_len << "\n";
    s << "model.boundary=" << (p.boundary == Boundary::clip ? "clip" : "wrap") << "\n";
    s << "model.d=" << p.d << "\n";
    switch (g.family) {
        case GrowthFamily::valley:
            s << "model.growth=valley\n";
            s << "model.valley_a=" << num(g.valley_a) << "\n";
            s << "model.valley_c=" << num(g.valley_c) << "\n";
            s << "model.valley_s=" << num(g.valley_s) << "\n";
            s << "model.valley_m=" << num(g.valley_m) << "\n";
            s << "model.valley_b=" << num(g.valley_b) << "\n";
            break;
        case GrowthFamily::logistic_const:
            s << "model.growth=logistic_const\n";
            s << "model.kappa=" << num(g.kappa) << "\n";
            break;
        case GrowthFamily::custom_table: {
            s << "model.growth=custom_table\n";
            s << "model.table_intercept=";
            for (size_t i = 0; i < g.table_intercept.size(); ++i)
                s << (i ? "," : "") << num(g.table_intercept[i]);
            s << "\nmodel.table_slope=";
            for (size_t i = 0; i < g.table_slope.size(); ++i)
                s << (i ? "," : "") << num(g.table_slope[i]);
            s << "\n";
            break;
        }
    }
    s << "sim.T_end=" << num(T_end) << "\n";
    s << "sim.initial_mass=" << num(initial_mass) << "\n";
    s << "sim.initial_state=";
    switch (initial_state) {
        case InitialState::all_uniform_pool: s << "all_uniform_pool"; break;
        case InitialState::one_type_per_site: s << "one_type_per_site"; break;
        case InitialState::snapshot_file: s << "snapshot_file"; break;
    }
    s << "\n";
    s << "sim.snapshot_path=" << snapshot_path << "\n";
    s << "sim.type_capacity=" << type_capacity << "\n";
    s << "sim.record_events=" << (record_events ? "true" : "false") << "\n";
    s << "predict.t_max=" << predict.t_max << "\n";
    s << "predict.rate_scale=" << num(predict.rate_scale) << "\n";
    s << "predict.N=" << num(predict.N) << "\n";
    s << "predict.delta=" << num(predict.delta) << "\n";
    s << "predict.wmf_prefactor=" << (predict.wmf_prefactor ? "true" : "false") << "\n";
    s << "predict.bc_value=" << num(predict.pde.bc_value) << "\n";
    s << "predict.tol_steady=" << num(predict.pde.tol_steady) << "\n";
    s << "predict.dt=" << num(predict.pde.dt) << "\n";
    s << "predict.max_steps=" << predict.pde.max_steps << "\n";
    s << "predict.reaction_scale="
      << (predict.pde.reaction_scale == ReactionScale::with_uVR ? "with_uVR" : "without_uVR") << "\n";
    s << "analysis.reference_sites=";
    for (size_t i = 0; i < analysis.reference_sites.size(); ++i)
        s << (i ? "," : "") << analysis.reference_sites[i];
    s << "\n";
    s << "analysis.replicates=" << analysis.replicates << "\n";
    s << "analysis.qv_horizon=" << num(analysis.qv_horizon) << "\n";
    s << "analysis.qv_replicates=" << analysis.qv_replicates << "\n";
    s << "io.out_dir=" << io.out_dir << "\n";
    s << "io.write_snapshots=" << (io.write_snapshots ? "true" : "false") << "\n";
    s << "rng.seed=" << seed << "\n";
    return s.str();
}

std::string ExperimentConfig::hash() const { return hash_hex(fnv1a64(canonical())); }

} // namespace slfv
