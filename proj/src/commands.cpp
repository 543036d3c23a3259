#include "slfv/commands.hpp"

#include "slfv/io.hpp"
#include "slfv/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <thread>

namespace slfv {

namespace fs = std::filesystem;

void run_jobs(int count, int threads, const std::function<void(int)>& job) {
    if (threads <= 1) {
        for (int k = 0; k < count; ++k) job(k);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int k = next.fetch_add(1); k < count; k = next.fetch_add(1)) job(k);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

SiteFunction make_bump(int grid_len) {
    SiteFunction phi(grid_len);
    double c = 0.5 * (grid_len - 1);
    double w = grid_len / 8.0;
    for (int x = 0; x < grid_len; ++x) {
        double z = (x - c) / w;
        phi[x] = std::exp(-z * z);
    }
    return phi;
}

namespace {

std::string snapshot_name(int k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "rep%05d.txt", k);
    return buf;
}

} // namespace

SimulateResult cmd_simulate(const ExperimentConfig& cfg_in, int threads) {
    ExperimentConfig cfg = cfg_in;
    cfg.finalize();
    const int L = cfg.params.grid_len;
    const auto& refs = cfg.analysis.reference_sites;
    const int reps = cfg.analysis.replicates;
    const std::string header = csv_header(cfg.hash());

    fs::create_directories(cfg.io.out_dir);
    if (cfg.io.write_snapshots) fs::create_directories(fs::path(cfg.io.out_dir) / "snapshots");

    SimulateResult out;
    out.samples.assign(reps, {});
    std::vector<std::vector<double>> final_totals(reps);
    std::vector<uint64_t> cand(reps, 0), acc(reps, 0);

    run_jobs(reps, threads, [&](int k) {
        SimConfig sc = cfg.make_sim_config();
        sc.seed = replicate_seed(cfg.seed, static_cast<uint64_t>(k));
        RunResult res = run(sc);
        final_totals[k] = res.field.totals();
        cand[k] = res.candidates;
        acc[k] = res.accepted;
        std::vector<std::vector<double>> per_ref(refs.size(), std::vector<double>(L, 0.0));
        for (size_t r = 0; r < refs.size(); ++r)
            for (int x = 0; x < L; ++x) per_ref[r][x] = identity_point(res.field, refs[r], x);
        out.samples[k] = std::move(per_ref);
        if (cfg.io.write_snapshots) {
            write_snapshot(res.field,
                           (fs::path(cfg.io.out_dir) / "snapshots" / snapshot_name(k)).string());
        }
    });

    out.mean_profile.assign(L, 0.0);
    for (int k = 0; k < reps; ++k) {
        out.candidates += cand[k];
        out.accepted += acc[k];
        for (int x = 0; x < L; ++x) out.mean_profile[x] += final_totals[k][x];
    }
    for (int x = 0; x < L; ++x) out.mean_profile[x] /= reps;

    std::string profile_path = (fs::path(cfg.io.out_dir) / "profile_mean.csv").string();
    write_profile_csv(profile_path, header, out.mean_profile,
                      {"replicates=" + std::to_string(reps),
                       "T_end=" + format_g17(cfg.T_end)});
    out.written.push_back(profile_path);

    // raw per-replicate identity values
    std::string raw_path = (fs::path(cfg.io.out_dir) / "identity_raw.csv").string();
    {
        std::ofstream f(raw_path);
        if (!f) throw std::runtime_error("cannot open " + raw_path);
        f << header << "\n";
        f << "replicate,ref_site,x,p\n";
        for (int k = 0; k < reps; ++k)
            for (size_t r = 0; r < refs.size(); ++r)
                for (int x = 0; x < L; ++x)
                    f << k << "," << refs[r] << "," << x << "," << format_g17(out.samples[k][r][x])
                      << "\n";
    }
    out.written.push_back(raw_path);

    if (reps >= 2) {
        out.table = replicate_stats(out.samples, refs, L);
        std::string table_path = (fs::path(cfg.io.out_dir) / "identity_table.csv").string();
        std::ofstream f(table_path);
        if (!f) throw std::runtime_error("cannot open " + table_path);
        f << header << "\n";
        f << "ref_site,x,mean,median,p25,p75,p05,p95,n_replicates,scale\n";
        for (size_t r = 0; r < refs.size(); ++r)
            for (int x = 0; x < L; ++x) {
                const IdentityStats& st = out.table.cells[r][x];
                f << refs[r] << "," << x << "," << format_g17(st.mean) << ","
                  << format_g17(st.median) << "," << format_g17(st.p25) << ","
                  << format_g17(st.p75) << "," << format_g17(st.p05) << ","
                  << format_g17(st.p95) << "," << reps << ",raw\n";
            }
        out.written.push_back(table_path);
    }
    return out;
}

PredictResult cmd_predict(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    cfg.finalize();
    const int L = cfg.params.grid_len;
    const std::string header = csv_header(cfg.hash());
    fs::create_directories(cfg.io.out_dir);

    PredictResult out;
    out.steady = steady_state(cfg.params, cfg.predict.pde);
    std::string steady_path = (fs::path(cfg.io.out_dir) / "steady_profile.csv").string();
    write_profile_csv(steady_path, header, out.steady.profile,
                      {std::string("steady_converged=") + (out.steady.converged ? "1" : "0"),
                       "steady_residual=" + format_g17(out.steady.residual),
                       "steady_steps=" + std::to_string(out.steady.steps)});
    out.written.push_back(steady_path);

    KernelResult kr = build_kernel(out.steady.profile, cfg.params.mu, cfg.predict.t_max,
                                   cfg.predict.rate_scale, cfg.params.boundary);
    out.theta = kr.theta.theta;
    out.prediction = align_prediction(out.theta, cfg.predict.N, cfg.predict.delta);

    std::string theta_path = (fs::path(cfg.io.out_dir) / "theta.csv").string();
    write_matrix_csv(theta_path, header, out.theta,
                     {"profile_hash=" + hash_hex(fnv1a64([&]() {
                          std::string s;
                          for (double v : out.steady.profile) s += format_g17(v) + ",";
                          return s;
                      }())),
                      "mu=" + format_g17(cfg.params.mu),
                      "t_max=" + std::to_string(cfg.predict.t_max),
                      "rate_scale=" + format_g17(cfg.predict.rate_scale)});
    out.written.push_back(theta_path);

    std::string pred_path = (fs::path(cfg.io.out_dir) / "prediction.csv").string();
    {
        std::ofstream f(pred_path);
        if (!f) throw std::runtime_error("cannot open " + pred_path);
        f << header << "\n";
        f << "# N=" << format_g17(cfg.predict.N) << " delta=" << format_g17(cfg.predict.delta)
          << "\n";
        f << "ref_site,x,theta,predicted\n";
        for (int r : cfg.analysis.reference_sites)
            for (int x = 0; x < L; ++x)
                f << r << "," << x << "," << format_g17(out.theta(r, x)) << ","
                  << format_g17(out.prediction(r, x)) << "\n";
    }
    out.written.push_back(pred_path);
    return out;
}

namespace {

struct TableRow {
    double mean, median, p25, p75, p05, p95;
    int n_replicates;
};

} // namespace

CompareResult cmd_compare(const ExperimentConfig& cfg_in, const std::string& sim_dir,
                          const std::string& pred_dir) {
    ExperimentConfig cfg = cfg_in;
    cfg.finalize();
    const std::string header = csv_header(cfg.hash());

    std::map<std::pair<int, int>, TableRow> sim;
    for (const auto& line : read_lines((fs::path(sim_dir) / "identity_table.csv").string())) {
        if (line.empty() || line[0] == '#' || line.rfind("ref_site", 0) == 0) continue;
        auto c = split(line, ',');
        if (c.size() != 10) throw std::runtime_error("malformed identity_table row: " + line);
        sim[{std::stoi(c[0]), std::stoi(c[1])}] =
            TableRow{std::stod(c[2]), std::stod(c[3]), std::stod(c[4]),
                     std::stod(c[5]), std::stod(c[6]), std::stod(c[7]), std::stoi(c[8])};
    }
    std::map<std::pair<int, int>, std::pair<double, double>> pred; // (theta, predicted)
    for (const auto& line : read_lines((fs::path(pred_dir) / "prediction.csv").string())) {
        if (line.empty() || line[0] == '#' || line.rfind("ref_site", 0) == 0) continue;
        auto c = split(line, ',');
        if (c.size() != 4) throw std::runtime_error("malformed prediction row: " + line);
        pred[{std::stoi(c[0]), std::stoi(c[1])}] = {std::stod(c[2]), std::stod(c[3])};
    }
    if (sim.empty() || pred.empty()) throw std::runtime_error("compare: empty inputs");
    for (const auto& [key, value] : pred) {
        (void)value;
        if (key.second >= cfg.params.grid_len)
            throw std::runtime_error("compare: prediction grid exceeds configured grid");
    }

    CompareResult out;
    int near_cov = 0, near_tot = 0, all_cov = 0, all_tot = 0;
    std::vector<double> theta_cells, mean_cells;
    bool any_band = false;
    for (const auto& [key, t] : sim) {
        auto it = pred.find(key);
        if (it == pred.end()) throw std::runtime_error("compare: reference grids do not match");
        if (t.n_replicates >= 2) any_band = true;
        theta_cells.push_back(it->second.first);
        mean_cells.push_back(t.mean);
    }
    out.coverage_defined = any_band;
    out.best_fit_N = best_alignment_N(theta_cells, mean_cells, cfg.predict.delta);

    std::string cmp_path = (fs::path(cfg.io.out_dir) / "comparison.csv").string();
    fs::create_directories(cfg.io.out_dir);
    std::ofstream f(cmp_path);
    if (!f) throw std::runtime_error("cannot open " + cmp_path);

    std::vector<std::string> rows;
    for (const auto& [key, t] : sim) {
        const auto& pr = pred.at(key);
        std::string covered = "NA";
        if (t.n_replicates >= 2) {
            bool inside = pr.second >= t.p05 && pr.second <= t.p95;
            covered = inside ? "1" : "0";
            ++all_tot;
            all_cov += inside;
            if (std::abs(key.second - key.first) <= 20) {
                ++near_tot;
                near_cov += inside;
            }
        }
        rows.push_back(std::to_string(key.first) + "," + std::to_string(key.second) + "," +
                       format_g17(t.mean) + "," + format_g17(t.median) + "," + format_g17(t.p05) +
                       "," + format_g17(t.p25) + "," + format_g17(t.p75) + "," + format_g17(t.p95) +
                       "," + format_g17(pr.second) + "," + covered);
    }
    out.coverage_near = near_tot ? static_cast<double>(near_cov) / near_tot : 0.0;
    out.coverage_all = all_tot ? static_cast<double>(all_cov) / all_tot : 0.0;
    out.cells_near = near_tot;

    for (int r : cfg.analysis.reference_sites) {
        auto s1 = sim.find({r, r + 1});
        auto s10 = sim.find({r, r + 10});
        auto p1 = pred.find({r, r + 1});
        auto p10 = pred.find({r, r + 10});
        if (s1 == sim.end() || s10 == sim.end() || p1 == pred.end() || p10 == pred.end()) continue;
        if (!(s1->second.mean > 0.0) || !(p1->second.second > 0.0)) continue;
        out.decorrelation.push_back(DecorrelationRow{
            r, s10->second.mean / s1->second.mean, p10->second.second / p1->second.second});
    }

    f << header << "\n";
    if (out.coverage_defined) {
        f << "# coverage_near=" << format_g17(out.coverage_near) << " cells_near=" << near_tot
          << " window=20\n";
        f << "# coverage_all=" << format_g17(out.coverage_all) << "\n";
    } else {
        f << "# coverage_near=NA coverage_all=NA (bands undefined with a single replicate)\n";
    }
    f << "# best_fit_N=" << format_g17(out.best_fit_N) << "\n";
    for (const auto& d : out.decorrelation)
        f << "# decorrelation ref=" << d.ref << " sim=" << format_g17(d.sim_ratio)
          << " pred=" << format_g17(d.pred_ratio) << "\n";
    f << "ref_site,x,sim_mean,sim_median,sim_p05,sim_p25,sim_p75,sim_p95,predicted,covered\n";
    for (const auto& row : rows) f << row << "\n";
    out.written.push_back(cmp_path);
    return out;
}

std::vector<ConvergenceRow> jump_operator_convergence(const ModelParams& base,
                                                      const std::vector<double>& deltas) {
    std::vector<ConvergenceRow> rows;
    const double Lc = base.grid_len; // continuum length
    for (double delta : deltas) {
        double h = delta * delta * delta;
        long W = std::lround(Lc / h);
        int ball_sites = static_cast<int>(std::lround(base.R / (delta * delta)));
        ModelParams p = base;
        p.boundary = Boundary::wrap;
        SiteFunction phi(W);
        const double omega = 2.0 * M_PI / Lc;
        for (long i = 0; i < W; ++i) phi[i] = std::sin(omega * (i * h));
        SiteFunction lphi = apply_jump_operator_radius(phi, p, delta, ball_sites);
        const double Dconst = p.u * p.ball_volume() * p.R * p.R / (p.d + 2.0);
        double err = 0.0;
        for (long i = 0; i < W; ++i) {
            double exact = -Dconst * omega * omega * phi[i];
            err = std::max(err, std::abs(lphi[i] - exact));
        }
        rows.push_back(ConvergenceRow{delta, err});
    }
    return rows;
}

double fit_log2_slope(const std::vector<ConvergenceRow>& rows) {
    // least squares of log2(err) against log2(delta)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : rows) {
        if (!(r.max_error > 0.0)) continue;
        double x = std::log2(r.delta), y = std::log2(r.max_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::runtime_error("convergence fit needs >= 2 points");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DiagnosticsResult cmd_diagnostics(const ExperimentConfig& cfg_in, int threads) {
    ExperimentConfig cfg = cfg_in;
    cfg.finalize();
    DiagnosticsResult out;

    out.convergence = jump_operator_convergence(cfg.params, {0.25, 0.125, 0.0625, 0.03125});
    out.convergence_slope = fit_log2_slope(out.convergence);

    {
        const int L = cfg.params.grid_len;
        SiteFunction n(L, 5.0), f(L);
        for (int i = 0; i < L; ++i) f[i] = static_cast<double>(i) * i;
        out.drift_identity_residual = drift_consistency_check(n, f).max_identity_error;
    }

    SimConfig sc = cfg.make_sim_config();
    sc.initial_state = InitialState::all_uniform_pool;
    out.qv = qv_diagnostic(sc, make_bump(cfg.params.grid_len), cfg.analysis.qv_horizon,
                           cfg.analysis.qv_replicates, threads);

    fs::create_directories(cfg.io.out_dir);
    std::string path = (fs::path(cfg.io.out_dir) / "diagnostics.txt").string();
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << csv_header(cfg.hash()) << "\n";
    f << "jump operator convergence (wrap, refined grids):\n";
    for (const auto& r : out.convergence)
        f << "  delta=" << format_g17(r.delta) << "  max_error=" << format_g17(r.max_error) << "\n";
    f << "  slope=" << format_g17(out.convergence_slope) << "\n";
    f << "generator identity residual: " << format_g17(out.drift_identity_residual) << "\n";
    f << "qv diagnostic: var=" << format_g17(out.qv.var_mc)
      << " qv_integral=" << format_g17(out.qv.qv_integral) << " ratio=" << format_g17(out.qv.ratio)
      << " replicates=" << out.qv.replicates << " horizon=" << format_g17(out.qv.horizon) << "\n";
    out.written.push_back(path);
    return out;
}

SteadyResult cmd_steady_state(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    cfg.finalize();
    SteadyResult res = steady_state(cfg.params, cfg.predict.pde);
    fs::create_directories(cfg.io.out_dir);
    std::string path = (fs::path(cfg.io.out_dir) / "steady_profile.csv").string();
    write_profile_csv(path, csv_header(cfg.hash()), res.profile,
                      {std::string("steady_converged=") + (res.converged ? "1" : "0"),
                       "steady_residual=" + format_g17(res.residual),
                       "steady_steps=" + std::to_string(res.steps)});
    return res;
}

} // namespace slfv
