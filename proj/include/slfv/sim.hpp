#pragma once

#include "slfv/core.hpp"
#include "slfv/field.hpp"
#include "slfv/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace slfv {

enum class InitialState { all_uniform_pool, one_type_per_site, snapshot_file };

struct SimConfig {
    ModelParams params;            // growth spec rides inside params.growth
    double T_end = 125.0;
    uint64_t seed = 0;
    double initial_mass = 3.0;
    InitialState initial_state = InitialState::all_uniform_pool;
    std::string snapshot_path;     // used when initial_state == snapshot_file
    std::optional<std::vector<double>> initial_profile; // uniform-pool profile overriding initial_mass
    int type_capacity = 2000;      // T_max
    bool record_events = false;
    bool check_sync_conservation = false;
    bool enforce_assumptions = true; // diagnostics may disable (e.g. r == 0 studies)
    std::vector<double> sample_times; // ascending; site totals recorded at each

    void validate() const;
};

struct EventRecord {
    double time;
    int32_t center;
    bool accepted;
    bool from_uniform;
    int32_t parent;       // -1 for rejected candidates
    double u_prime;       // 0 for rejected
    double added_mass;    // per ball site
    int32_t evicted_type; // -1 unless the parent allocation evicted
    double evicted_mass;
};

struct RunResult {
    explicit RunResult(PopulationField f) : field(std::move(f)) {}

    PopulationField field;
    std::vector<EventRecord> events; // only when record_events
    uint64_t candidates = 0;
    uint64_t accepted = 0;
    uint64_t evictions = 0;
    double evicted_mass_total = 0.0;
    double max_sync_total_drift = 0.0; // only when check_sync_conservation
    std::vector<std::vector<double>> sampled_totals; // one profile per sample time
};

struct ParentDraw {
    bool from_uniform;
    int32_t type_id; // valid when !from_uniform
};

// Parent drawn from the normalised mass distribution over the (synced) ball:
// uniform-pool marker with probability ball-uniform/ball-total, otherwise a
// type id with probability proportional to its ball mass.
ParentDraw sample_parent(const PopulationField& field, int x, Rng& rng);

struct Allocation {
    int32_t id;
    int32_t evicted_type; // -1 if a fresh id was free
    double evicted_mass;
};

// Fresh id while capacity remains; otherwise evicts the alive type of smallest
// global mass (ties: lowest id), folding its mass into the uniform pools.
Allocation allocate_type(PopulationField& field);

// One accepted event at centre x (ball must be mutation-synced): every ball
// mass scales by (1-u'), parent gains u'(1+r_x(nbar))nbar per ball site.
EventRecord apply_replacement(PopulationField& field, int x, int32_t parent, double t, double nbar);

// Observer over the piecewise-constant population path: called with the
// pre-event state for every interval between accepted events (and a final
// interval ending at T_end). Must not touch the RNG.
using IntervalObserver = std::function<void(const PopulationField&, double t0, double t1)>;

RunResult run(const SimConfig& cfg, const IntervalObserver& observer = nullptr);

} // namespace slfv
