#include "slfv/commands.hpp"
#include "slfv/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <stdexcept>
#include <thread>

namespace {

slfv::ExperimentConfig load_config(const std::string& config_path,
                                   const std::vector<std::string>& overrides) {
    slfv::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = slfv::parse_config_file(config_path);
    for (const auto& o : overrides) slfv::apply_override(cfg, o);
    return cfg;
}

int default_threads() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mSLFV laboratory: event-driven simulation and Wright-Malecot prediction"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    int threads = default_threads();
    app.add_option("--config", config_path, "configuration file (INI sections)");
    app.add_option("--set", overrides, "override a config key, e.g. --set sim.T_end=10");
    app.add_option("--out", out_dir, "output directory (overrides io.out_dir)");
    app.add_option("--threads", threads, "replicate worker count");

    auto* sim = app.add_subcommand("simulate", "run replicate simulations, write profiles and identity tables");
    auto* pred = app.add_subcommand("predict", "steady state + Theta kernel + aligned prediction");
    auto* cmp = app.add_subcommand("compare", "join simulation and prediction outputs");
    std::string sim_dir, pred_dir;
    cmp->add_option("--sim-dir", sim_dir, "directory holding identity_table.csv");
    cmp->add_option("--pred-dir", pred_dir, "directory holding prediction.csv");
    auto* diag = app.add_subcommand("diagnostics", "operator convergence, generator identity, QV check");
    auto* steady = app.add_subcommand("steady-state", "steady profile only");

    CLI11_PARSE(app, argc, argv);

    try {
        slfv::ExperimentConfig cfg = load_config(config_path, overrides);
        if (!out_dir.empty()) cfg.io.out_dir = out_dir;

        if (sim->parsed()) {
            auto res = slfv::cmd_simulate(cfg, threads);
            std::cout << "replicates done: candidates=" << res.candidates
                      << " accepted=" << res.accepted << "\n";
            for (const auto& p : res.written) std::cout << "wrote " << p << "\n";
        } else if (pred->parsed()) {
            auto res = slfv::cmd_predict(cfg);
            std::cout << "steady " << (res.steady.converged ? "converged" : "NOT converged")
                      << " residual=" << slfv::format_g17(res.steady.residual)
                      << " steps=" << res.steady.steps << "\n";
            for (const auto& p : res.written) std::cout << "wrote " << p << "\n";
        } else if (cmp->parsed()) {
            cfg.finalize();
            std::string sdir = sim_dir.empty() ? cfg.io.out_dir : sim_dir;
            std::string pdir = pred_dir.empty() ? cfg.io.out_dir : pred_dir;
            auto res = slfv::cmd_compare(cfg, sdir, pdir);
            if (res.coverage_defined)
                std::cout << "coverage(|x-ref|<=20)=" << slfv::format_g17(res.coverage_near)
                          << " over " << res.cells_near << " cells\n";
            else
                std::cout << "coverage=NA (single replicate)\n";
            std::cout << "best_fit_N=" << slfv::format_g17(res.best_fit_N) << "\n";
            for (const auto& d : res.decorrelation)
                std::cout << "decorrelation ref=" << d.ref
                          << " sim=" << slfv::format_g17(d.sim_ratio)
                          << " pred=" << slfv::format_g17(d.pred_ratio) << "\n";
            for (const auto& p : res.written) std::cout << "wrote " << p << "\n";
        } else if (diag->parsed()) {
            auto res = slfv::cmd_diagnostics(cfg, threads);
            std::cout << "convergence slope=" << slfv::format_g17(res.convergence_slope) << "\n";
            std::cout << "qv ratio=" << slfv::format_g17(res.qv.ratio) << "\n";
            for (const auto& p : res.written) std::cout << "wrote " << p << "\n";
        } else if (steady->parsed()) {
            auto res = slfv::cmd_steady_state(cfg);
            std::cout << "steady " << (res.converged ? "converged" : "NOT converged")
                      << " residual=" << slfv::format_g17(res.residual) << " steps=" << res.steps
                      << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
