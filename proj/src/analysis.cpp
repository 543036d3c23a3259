#include "slfv/analysis.hpp"

#include "slfv/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace slfv {

double identity_point(const PopulationField& field, int l1, int l2) {
    const SiteState& a = field.site(l1);
    const SiteState& b = field.site(l2);
    if (!(a.total > 0.0) || !(b.total > 0.0))
        throw std::domain_error("identity_point: zero site mass");
    double acc = 0.0;
    size_t i = 0, j = 0;
    while (i < a.entries.size() && j < b.entries.size()) {
        if (a.entries[i].id < b.entries[j].id) {
            ++i;
        } else if (a.entries[i].id > b.entries[j].id) {
            ++j;
        } else {
            acc += (a.entries[i].stored * a.factor) * (b.entries[j].stored * b.factor);
            ++i;
            ++j;
        }
    }
    return acc / (a.total * b.total);
}

double identity_weighted_numerator(const PopulationField& field, const SiteFunction& psi1,
                                   const SiteFunction& psi2) {
    const int L = field.grid_len();
    const int T = field.ledger().highest_ever();
    std::vector<double> s1(T, 0.0), s2(T, 0.0);
    for (int x = 0; x < L; ++x) {
        const SiteState& s = field.site(x);
        for (const auto& e : s.entries) {
            double m = e.stored * s.factor;
            s1[e.id] += psi1[x] * m;
            s2[e.id] += psi2[x] * m;
        }
    }
    double acc = 0.0;
    for (int k = 0; k < T; ++k) acc += s1[k] * s2[k];
    return acc;
}

double identity_weighted(const PopulationField& field, const SiteFunction& psi1,
                         const SiteFunction& psi2) {
    const int L = field.grid_len();
    double d1 = 0.0, d2 = 0.0;
    for (int x = 0; x < L; ++x) {
        d1 += psi1[x] * field.total_mass(x);
        d2 += psi2[x] * field.total_mass(x);
    }
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw std::domain_error("identity_weighted: sampling density has zero overlap with the population");
    return identity_weighted_numerator(field, psi1, psi2) / (d1 * d2);
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("percentile of empty sample");
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    if (n == 1) return values[0];
    double h = (n - 1) * p;
    size_t lo = static_cast<size_t>(h);
    if (lo >= n - 1) return values[n - 1];
    double frac = h - lo;
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

IdentityTable replicate_stats(const std::vector<std::vector<std::vector<double>>>& samples,
                              const std::vector<int>& reference_sites, int grid_len) {
    if (samples.size() < 2) throw std::invalid_argument("replicate_stats needs >= 2 replicates");
    IdentityTable table;
    table.reference_sites = reference_sites;
    table.grid_len = grid_len;
    table.n_replicates = static_cast<int>(samples.size());
    table.cells.assign(reference_sites.size(), std::vector<IdentityStats>(grid_len));
    std::vector<double> buf(samples.size());
    for (size_t r = 0; r < reference_sites.size(); ++r) {
        for (int x = 0; x < grid_len; ++x) {
            double mean = 0.0;
            for (size_t k = 0; k < samples.size(); ++k) {
                buf[k] = samples[k][r][x];
                mean += buf[k];
            }
            mean /= samples.size();
            IdentityStats& st = table.cells[r][x];
            st.mean = mean;
            st.median = percentile(buf, 0.5);
            st.p25 = percentile(buf, 0.25);
            st.p75 = percentile(buf, 0.75);
            st.p05 = percentile(buf, 0.05);
            st.p95 = percentile(buf, 0.95);
        }
    }
    return table;
}

QvReport qv_diagnostic(const SimConfig& cfg, const SiteFunction& phi, double horizon,
                       int replicates, int threads, int mean_path_samples) {
    if (replicates < 2) throw std::invalid_argument("qv_diagnostic needs >= 2 replicates");
    const ModelParams& p = cfg.params;
    const int L = p.grid_len;
    if (static_cast<int>(phi.size()) != L) throw std::invalid_argument("phi length mismatch");

    std::vector<double> sample_times(mean_path_samples);
    for (int i = 0; i < mean_path_samples; ++i)
        sample_times[i] = horizon * i / (mean_path_samples - 1);

    std::vector<double> increments(replicates, 0.0);
    std::vector<std::vector<std::vector<double>>> sampled(replicates);

    auto run_one = [&](int k) {
        SimConfig c = cfg;
        c.T_end = horizon;
        c.seed = replicate_seed(cfg.seed, static_cast<uint64_t>(k));
        c.sample_times = sample_times;
        double drift_integral = 0.0;
        double phi_n0 = 0.0;
        bool first = true;
        IntervalObserver obs = [&](const PopulationField& f, double t0, double t1) {
            std::vector<double> n = f.totals();
            if (first) {
                for (int x = 0; x < L; ++x) phi_n0 += phi[x] * n[x];
                first = false;
            }
            drift_integral += mean_drift_rate(n, phi, p, p.growth) * (t1 - t0);
        };
        RunResult res = run(c, obs);
        double phi_nT = 0.0;
        for (int x = 0; x < L; ++x) phi_nT += phi[x] * res.field.total_mass(x);
        increments[k] = phi_nT - phi_n0 - drift_integral;
        sampled[k] = std::move(res.sampled_totals);
    };

    if (threads <= 1) {
        for (int k = 0; k < replicates; ++k) run_one(k);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&]() {
                for (int k = next.fetch_add(1); k < replicates; k = next.fetch_add(1)) run_one(k);
            });
        for (auto& th : pool) th.join();
    }

    // Var of the compensated increment (replicate order fixed by index).
    double mean = 0.0;
    for (double m : increments) mean += m;
    mean /= replicates;
    double var = 0.0;
    for (double m : increments) var += (m - mean) * (m - mean);
    var /= (replicates - 1);

    // qv_formula along the empirical mean path, trapezoid in time.
    double integral = 0.0;
    std::vector<double> mean_profile(L);
    double prev_rate = 0.0;
    for (int i = 0; i < mean_path_samples; ++i) {
        std::fill(mean_profile.begin(), mean_profile.end(), 0.0);
        for (int k = 0; k < replicates; ++k)
            for (int x = 0; x < L; ++x) mean_profile[x] += sampled[k][i][x];
        for (int x = 0; x < L; ++x) mean_profile[x] /= replicates;
        double rate = qv_formula(mean_profile, phi, p, p.growth, 1.0, 1.0);
        if (i > 0) integral += 0.5 * (rate + prev_rate) * (sample_times[i] - sample_times[i - 1]);
        prev_rate = rate;
    }

    QvReport rep;
    rep.var_mc = var;
    rep.qv_integral = integral;
    rep.ratio = integral != 0.0 ? var / integral : 0.0;
    rep.replicates = replicates;
    rep.horizon = horizon;
    return rep;
}

double best_alignment_N(const std::vector<double>& theta_cells,
                        const std::vector<double>& sim_mean_cells, double delta) {
    if (theta_cells.size() != sim_mean_cells.size())
        throw std::invalid_argument("best_alignment_N: size mismatch");
    double acc = 0.0;
    int count = 0;
    for (size_t i = 0; i < theta_cells.size(); ++i) {
        if (theta_cells[i] > 0.0 && sim_mean_cells[i] > 0.0) {
            acc += std::log(theta_cells[i] / (delta * sim_mean_cells[i]));
            ++count;
        }
    }
    if (count == 0) throw std::domain_error("best_alignment_N: no usable cells");
    return std::exp(acc / count);
}

} // namespace slfv
