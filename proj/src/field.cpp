#include "slfv/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slfv {

TypeLedger::TypeLedger(int capacity) : capacity_(capacity), site_count_(capacity, 0) {}

int32_t TypeLedger::acquire() {
    if (alive_count_ == capacity_) throw std::logic_error("TypeLedger::acquire on a full ledger");
    int32_t id;
    if (!free_.empty()) {
        id = *free_.begin();
        free_.erase(free_.begin());
    } else {
        id = highest_++;
    }
    ++alive_count_;
    return id;
}

void TypeLedger::acquire_id(int32_t id) {
    auto it = free_.find(id);
    if (it == free_.end()) throw std::logic_error("TypeLedger::acquire_id: id not free");
    free_.erase(it);
    ++alive_count_;
}

void TypeLedger::site_attached(int32_t id) { ++site_count_[id]; }

void TypeLedger::site_detached(int32_t id) {
    if (--site_count_[id] == 0) {
        --alive_count_;
        free_.insert(id);
    }
}

void TypeLedger::ensure_alive(int32_t id) {
    if (id < 0 || id >= capacity_) throw std::out_of_range("type id outside ledger capacity");
    while (highest_ <= id) free_.insert(highest_++);
    auto it = free_.find(id);
    if (it != free_.end()) {
        free_.erase(it);
        ++alive_count_;
    }
}

PopulationField::PopulationField(const ModelParams& params, double initial_mass, int type_capacity)
    : params_(params), ledger_(type_capacity), sites_(params.grid_len) {
    fold_threshold_ = 1e-15 * params_.n_max;
    for (auto& s : sites_) {
        s.total = initial_mass;
        s.stored_uniform = initial_mass;
    }
}

std::vector<double> PopulationField::totals() const {
    std::vector<double> out(sites_.size());
    for (size_t i = 0; i < sites_.size(); ++i) out[i] = sites_[i].total;
    return out;
}

double PopulationField::global_mass() const {
    double acc = 0.0;
    for (const auto& s : sites_) acc += s.total;
    return acc;
}

double PopulationField::type_mass(int x, int32_t id) const {
    const auto& e = sites_[x].entries;
    auto it = std::lower_bound(e.begin(), e.end(), id,
                               [](const TypeEntry& a, int32_t b) { return a.id < b; });
    if (it == e.end() || it->id != id) return 0.0;
    return it->stored * sites_[x].factor;
}

void PopulationField::sync_site(int x, double t, double mu) {
    SiteState& s = sites_[x];
    double dt = t - s.last_touch;
    if (dt == 0.0) return;
    if (dt < 0.0) throw std::logic_error("sync_site: time ran backwards");
    if (mu > 0.0) {
        double decay = std::exp(-mu * dt);
        // uniform' = uniform*decay + total*(1-decay), expressed through the factor
        s.stored_uniform += s.total * (1.0 - decay) / (s.factor * decay);
        s.factor *= decay;
        if (s.factor < 1e-140) renormalise(x);
    }
    if (static_cast<int>(s.entries.size()) >= s.fold_trigger) fold_sweep(x);
    s.last_touch = t;
}

void PopulationField::sync_all(double t, double mu) {
    for (int x = 0; x < grid_len(); ++x) sync_site(x, t, mu);
}

void PopulationField::apply_event_site(int x, double u_prime, int32_t parent, double add) {
    SiteState& s = sites_[x];
    s.factor *= (1.0 - u_prime);
    if (s.factor < 1e-140) renormalise(x);
    s.total = (1.0 - u_prime) * s.total + add;
    if (s.total > params_.n_max * (1.0 + 1e-9))
        throw std::runtime_error("site total exceeded n_max: bound violated at site " + std::to_string(x));
    auto& e = s.entries;
    auto it = std::lower_bound(e.begin(), e.end(), parent,
                               [](const TypeEntry& a, int32_t b) { return a.id < b; });
    if (it != e.end() && it->id == parent) {
        it->stored += add / s.factor;
    } else {
        e.insert(it, TypeEntry{parent, add / s.factor});
        ledger_.site_attached(parent);
    }
}

void PopulationField::make_monomorphic(int32_t id, double mass) {
    ledger_.ensure_alive(id);
    for (int x = 0; x < grid_len(); ++x) {
        SiteState& s = sites_[x];
        for (const auto& e : s.entries) ledger_.site_detached(e.id);
        s.entries.clear();
        s.entries.push_back(TypeEntry{id, mass});
        ledger_.site_attached(id);
        s.stored_uniform = 0.0;
        s.factor = 1.0;
        s.total = mass;
    }
}

void PopulationField::set_uniform_profile(const std::vector<double>& n) {
    if (static_cast<int>(n.size()) != grid_len())
        throw std::invalid_argument("profile length does not match grid");
    for (int x = 0; x < grid_len(); ++x) {
        SiteState& s = sites_[x];
        for (const auto& e : s.entries) ledger_.site_detached(e.id);
        s.entries.clear();
        s.stored_uniform = n[x];
        s.factor = 1.0;
        s.total = n[x];
    }
}

double PopulationField::fold_type_everywhere(int32_t id) {
    double folded = 0.0;
    for (int x = 0; x < grid_len(); ++x) {
        SiteState& s = sites_[x];
        auto& e = s.entries;
        auto it = std::lower_bound(e.begin(), e.end(), id,
                                   [](const TypeEntry& a, int32_t b) { return a.id < b; });
        if (it != e.end() && it->id == id) {
            folded += it->stored * s.factor;
            s.stored_uniform += it->stored; // same factor: exact transfer
            e.erase(it);
            ledger_.site_detached(id);
        }
    }
    return folded;
}

std::vector<double> PopulationField::type_global_masses() const {
    std::vector<double> acc(ledger_.highest_ever(), 0.0);
    for (const auto& s : sites_)
        for (const auto& e : s.entries) acc[e.id] += e.stored * s.factor;
    return acc;
}

void PopulationField::materialise() {
    for (int x = 0; x < grid_len(); ++x) {
        fold_sweep(x);
        SiteState& s = sites_[x];
        for (auto& e : s.entries) e.stored *= s.factor;
        s.stored_uniform *= s.factor;
        s.factor = 1.0;
    }
}

void PopulationField::deposit(int x, int32_t id, double true_mass) {
    ledger_.ensure_alive(id);
    SiteState& s = sites_[x];
    auto& e = s.entries;
    auto it = std::lower_bound(e.begin(), e.end(), id,
                               [](const TypeEntry& a, int32_t b) { return a.id < b; });
    if (it != e.end() && it->id == id) {
        it->stored += true_mass / s.factor;
    } else {
        e.insert(it, TypeEntry{id, true_mass / s.factor});
        ledger_.site_attached(id);
    }
    s.total += true_mass;
}

void PopulationField::fold_sweep(int x) {
    SiteState& s = sites_[x];
    double stored_thresh = fold_threshold_ / s.factor;
    auto& e = s.entries;
    size_t keep = 0;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i].stored < stored_thresh) {
            s.stored_uniform += e[i].stored;
            ledger_.site_detached(e[i].id);
        } else {
            e[keep++] = e[i];
        }
    }
    e.resize(keep);
    s.fold_trigger = static_cast<int>(keep) + 64;
}

void PopulationField::renormalise(int x) {
    SiteState& s = sites_[x];
    for (auto& e : s.entries) e.stored *= s.factor;
    s.stored_uniform *= s.factor;
    s.factor = 1.0;
}

} // namespace slfv
