#pragma once

#include "slfv/core.hpp"

#include <cstdint>
#include <set>
#include <vector>

namespace slfv {

// Explicit per-site type mass. Stored masses carry a per-site multiplicative
// factor (see SiteState); true mass = stored * factor.
struct TypeEntry {
    int32_t id;
    double stored;
};

struct SiteState {
    double total = 0.0;          // true total mass n(x), kept current under events
    double factor = 1.0;         // lazy multiplier for uniform + entries
    double stored_uniform = 0.0; // uniform-pool mass / factor
    double last_touch = 0.0;     // time of last mutation sync
    int fold_trigger = 96;       // entry count that schedules the next fold sweep
    std::vector<TypeEntry> entries; // sorted by id
};

// Bookkeeping for the bounded set of explicit type labels.
class TypeLedger {
public:
    explicit TypeLedger(int capacity = 2000);

    int capacity() const { return capacity_; }
    int alive_count() const { return alive_count_; }
    bool full() const { return alive_count_ == capacity_; }
    bool is_alive(int32_t id) const { return id >= 0 && id < highest_ && site_count_[id] > 0; }
    int site_count(int32_t id) const { return site_count_[id]; }
    int highest_ever() const { return highest_; }

    // Fresh id: lowest free index ("next still-empty type").
    int32_t acquire();
    // Re-acquire a specific id that was just released (eviction reuse).
    void acquire_id(int32_t id);

    void site_attached(int32_t id);
    void site_detached(int32_t id); // releases the id when its site count drops to 0

    // Make an id from a snapshot alive without attaching sites yet.
    void ensure_alive(int32_t id);

private:
    int capacity_;
    int alive_count_ = 0;
    int highest_ = 0; // ids ever handed out live in [0, highest_)
    std::vector<int> site_count_;
    std::set<int32_t> free_; // released ids below highest_
};

class PopulationField {
public:
    PopulationField(const ModelParams& params, double initial_mass, int type_capacity = 2000);

    const ModelParams& params() const { return params_; }
    int grid_len() const { return params_.grid_len; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    double total_mass(int x) const { return sites_[x].total; }
    std::vector<double> totals() const;
    double global_mass() const;

    // True masses (factor applied); analysis-time accessors.
    double uniform_mass(int x) const { return sites_[x].stored_uniform * sites_[x].factor; }
    double type_mass(int x, int32_t id) const;
    const SiteState& site(int x) const { return sites_[x]; }
    SiteState& site_mut(int x) { return sites_[x]; }

    TypeLedger& ledger() { return ledger_; }
    const TypeLedger& ledger() const { return ledger_; }

    // Deterministic mutation flow on one site, from its last_touch to t:
    // explicit masses decay by e^{-mu dt}, the complement accrues to uniform,
    // the site total is untouched. Folds tiny entries when scheduled.
    void sync_site(int x, double t, double mu);
    void sync_all(double t, double mu);

    // One reproduction event at accepted centre x: every ball mass scales by
    // (1-u'), the parent entry gains `add` true mass per site. Ball sites must
    // already be synced to the current time.
    void apply_event_site(int x, double u_prime, int32_t parent, double add);

    // Replace the whole field by mass `mass` of a single explicit type.
    void make_monomorphic(int32_t id, double mass);
    // Replace site contents with uniform-pool mass only.
    void set_uniform_profile(const std::vector<double>& n);

    // Fold one type into the uniform pool at every site (eviction).
    // Returns the true global mass folded.
    double fold_type_everywhere(int32_t id);

    // True global mass per type id in [0, highest_ever), summed site-ascending.
    std::vector<double> type_global_masses() const;

    // Apply factors, drop empty entries; leaves every factor at 1.
    void materialise();

    // Insert or add true mass to (x, id) respecting sorted order. Attaches the
    // site to the ledger when the entry is new.
    void deposit(int x, int32_t id, double true_mass);

    double fold_threshold() const { return fold_threshold_; }

private:
    void fold_sweep(int x);
    void renormalise(int x);

    ModelParams params_;
    TypeLedger ledger_;
    std::vector<SiteState> sites_;
    double time_ = 0.0;
    double fold_threshold_;
};

} // namespace slfv
