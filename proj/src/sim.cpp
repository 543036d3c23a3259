#include "slfv/sim.hpp"

#include "slfv/io.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slfv {

void SimConfig::validate() const {
    params.validate();
    if (!(T_end >= 0.0)) throw std::invalid_argument("T_end must be >= 0");
    if (params.n_max <= 0.0) throw std::invalid_argument("n_max must be set before running");
    if (!(initial_mass > 0.0) || initial_mass > params.n_max)
        throw std::invalid_argument("initial_mass must lie in (0, n_max]");
    if (type_capacity < 1) throw std::invalid_argument("type capacity must be >= 1");
    if (initial_state == InitialState::snapshot_file && snapshot_path.empty())
        throw std::invalid_argument("snapshot initial state needs a snapshot path");
    if (!std::is_sorted(sample_times.begin(), sample_times.end()))
        throw std::invalid_argument("sample_times must be ascending");
    if (!sample_times.empty() && sample_times.front() < 0.0)
        throw std::invalid_argument("sample_times must be >= 0");
    if (initial_profile && static_cast<int>(initial_profile->size()) != params.grid_len)
        throw std::invalid_argument("initial_profile length must equal grid_len");
    if (enforce_assumptions) {
        AssumptionReport rep = validate_assumptions(params);
        if (!rep.ok) throw std::invalid_argument("assumption check failed: " + rep.message);
    }
}

ParentDraw sample_parent(const PopulationField& field, int x, Rng& rng) {
    const ModelParams& p = field.params();
    double ball_total = 0.0;
    for_ball_sites(x, p.R, p.grid_len, p.boundary, [&](int y) { ball_total += field.total_mass(y); });
    if (!(ball_total > 0.0)) throw std::domain_error("sample_parent: ball carries no mass");
    double v = rng.u01() * ball_total;

    ParentDraw last{true, -1};
    bool found = false;
    ParentDraw out{true, -1};
    for_ball_sites(x, p.R, p.grid_len, p.boundary, [&](int y) {
        if (found) return;
        const SiteState& s = field.site(y);
        if (v >= s.total) { // target lies in a later site
            v -= s.total;
            return;
        }
        double um = s.stored_uniform * s.factor;
        if (um > 0.0) last = ParentDraw{true, -1};
        if (v < um) {
            out = ParentDraw{true, -1};
            found = true;
            return;
        }
        v -= um;
        for (const auto& e : s.entries) {
            double m = e.stored * s.factor;
            if (m > 0.0) last = ParentDraw{false, e.id};
            if (v < m) {
                out = ParentDraw{false, e.id};
                found = true;
                return;
            }
            v -= m;
        }
        // rounding pushed the target past this site's parts; fall through
    });
    return found ? out : last;
}

Allocation allocate_type(PopulationField& field) {
    TypeLedger& ledger = field.ledger();
    if (!ledger.full()) return Allocation{ledger.acquire(), -1, 0.0};
    std::vector<double> globals = field.type_global_masses();
    int32_t victim = -1;
    double smallest = std::numeric_limits<double>::infinity();
    for (int32_t id = 0; id < static_cast<int32_t>(globals.size()); ++id) {
        if (!ledger.is_alive(id)) continue;
        if (globals[id] < smallest) {
            smallest = globals[id];
            victim = id;
        }
    }
    if (victim < 0) throw std::logic_error("allocate_type: full ledger with no alive types");
    double folded = field.fold_type_everywhere(victim);
    ledger.acquire_id(victim);
    return Allocation{victim, victim, folded};
}

EventRecord apply_replacement(PopulationField& field, int x, int32_t parent, double t, double nbar) {
    const ModelParams& p = field.params();
    double u_prime = p.u / (nbar + 1.0);
    double add = u_prime * (1.0 + growth_eval(p.growth, x, nbar)) * nbar;
    for_ball_sites(x, p.R, p.grid_len, p.boundary,
                   [&](int y) { field.apply_event_site(y, u_prime, parent, add); });
    return EventRecord{t, x, true, false, parent, u_prime, add, -1, 0.0};
}

namespace {

double site_parts_sum(const SiteState& s) {
    double acc = s.stored_uniform;
    for (const auto& e : s.entries) acc += e.stored;
    return acc * s.factor;
}

} // namespace

RunResult run(const SimConfig& cfg, const IntervalObserver& observer) {
    cfg.validate();
    const ModelParams& p = cfg.params;
    const int L = p.grid_len;

    PopulationField field = [&]() {
        switch (cfg.initial_state) {
            case InitialState::snapshot_file:
                return load_snapshot(cfg.snapshot_path, p, cfg.type_capacity);
            case InitialState::one_type_per_site: {
                PopulationField f(p, 0.0, cfg.type_capacity);
                for (int x = 0; x < L; ++x) f.deposit(x, x, cfg.initial_mass);
                return f;
            }
            case InitialState::all_uniform_pool:
            default: {
                PopulationField f(p, cfg.initial_mass, cfg.type_capacity);
                if (cfg.initial_profile) f.set_uniform_profile(*cfg.initial_profile);
                return f;
            }
        }
    }();

    RunResult result{std::move(field)};
    PopulationField& f = result.field;

    Rng rng(cfg.seed);
    const double cand_rate = L * (p.n_max + 1.0);
    double t = 0.0;
    double t_interval = 0.0; // start of the current constant-state interval
    size_t next_sample = 0;

    auto flush_samples = [&](double upto) {
        while (next_sample < cfg.sample_times.size() && cfg.sample_times[next_sample] <= upto) {
            result.sampled_totals.push_back(f.totals());
            ++next_sample;
        }
    };

    auto instrumented_sync = [&](int y, double now) {
        if (cfg.check_sync_conservation) {
            double before = site_parts_sum(f.site(y));
            f.sync_site(y, now, p.mu);
            double after = site_parts_sum(f.site(y));
            double scale = std::max({1.0, std::abs(before), f.total_mass(y)});
            double drift = std::max(std::abs(after - before), std::abs(after - f.total_mass(y))) / scale;
            result.max_sync_total_drift = std::max(result.max_sync_total_drift, drift);
        } else {
            f.sync_site(y, now, p.mu);
        }
    };

    while (true) {
        double t_next = t + rng.exponential(cand_rate);
        if (t_next > cfg.T_end) break;
        flush_samples(t_next);
        t = t_next;
        ++result.candidates;

        int x = static_cast<int>(rng.uniform_below(static_cast<uint32_t>(L)));
        double w = rng.u01();
        double nbar = 0.0;
        {
            double acc = 0.0;
            int cnt = 0;
            for_ball_sites(x, p.R, L, p.boundary, [&](int y) {
                acc += f.total_mass(y);
                ++cnt;
            });
            nbar = acc / cnt;
        }
        if (w >= (nbar + 1.0) / (p.n_max + 1.0)) {
            if (cfg.record_events)
                result.events.push_back(EventRecord{t, x, false, false, -1, 0.0, 0.0, -1, 0.0});
            continue;
        }

        if (observer) observer(f, t_interval, t);
        t_interval = t;

        for_ball_sites(x, p.R, L, p.boundary, [&](int y) { instrumented_sync(y, t); });

        ParentDraw draw = sample_parent(f, x, rng);
        int32_t parent;
        int32_t evicted_type = -1;
        double evicted_mass = 0.0;
        if (draw.from_uniform) {
            Allocation alloc = allocate_type(f);
            parent = alloc.id;
            evicted_type = alloc.evicted_type;
            evicted_mass = alloc.evicted_mass;
            if (evicted_type >= 0) {
                ++result.evictions;
                result.evicted_mass_total += evicted_mass;
            }
        } else {
            parent = draw.type_id;
        }

        EventRecord rec = apply_replacement(f, x, parent, t, nbar);
        ++result.accepted;
        if (cfg.record_events) {
            rec.from_uniform = draw.from_uniform;
            rec.evicted_type = evicted_type;
            rec.evicted_mass = evicted_mass;
            result.events.push_back(rec);
        }
    }

    if (observer) observer(f, t_interval, cfg.T_end);
    flush_samples(cfg.T_end);
    for (int y = 0; y < L; ++y) instrumented_sync(y, cfg.T_end);
    f.set_time(cfg.T_end);
    return result;
}

} // namespace slfv
