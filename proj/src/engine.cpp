#include "axl/engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace axl {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Engine::Engine(const SystemParams& params, VertexConfig initial, Fault fault)
    : params_(params), mode_(Mode::vertex), fault_(fault),
      features_(params.features), num_edges_(params.num_edges()),
      marks_(params.seed), config_(std::move(initial)),
      interfaces_(interface_view(*config_)) {
    params_.validate();
    if (params_.topology == Topology::killed_half_line)
        throw std::invalid_argument("vertex mode has no killed-half-line topology");
    if (config_->size() != params_.size || config_->features() != params_.features ||
        config_->states() != params_.states || config_->topology() != params_.topology)
        throw std::invalid_argument("initial configuration does not match params");
    cursors_.resize(static_cast<std::size_t>(num_edges_) * features_);
    in_heap_.assign(cursors_.size(), 0);
    level_counts_.assign(features_, 0);
    rates_.resize(features_ + 1);
    thresholds_.resize(features_ + 1);
    rates_[0] = Rational{0};
    thresholds_[0] = 0.0;
    for (int j = 1; j <= features_; ++j) {
        rates_[j] = jump_rate(j, features_);
        thresholds_[j] = rates_[j].to_double();
        if (fault_ == Fault::half_rate) thresholds_[j] *= 0.5;
    }
    total_particles_ = interfaces_.total_particles();
    for (int u = 0; u < num_edges_; ++u) {
        const int z = interfaces_.zeta(u);
        if (z == features_) ++frozen_edges_;
        else if (z > 0) ++active_edges_;
        for (int i = 0; i < features_; ++i)
            if (interfaces_.occupied(u, i)) {
                ++level_counts_[i];
                schedule(u, i);
            }
    }
    absorption_time_ = 0.0;
}

Engine::Engine(const SystemParams& params, InterfaceState initial, Fault fault)
    : params_(params), mode_(Mode::interface_walks), fault_(fault),
      features_(params.features), num_edges_(params.num_edges()),
      marks_(params.seed), interfaces_(std::move(initial)) {
    params_.validate();
    if (params_.states != 2)
        throw std::invalid_argument("interface mode requires q = 2");
    if (interfaces_.num_edges() != num_edges_ ||
        interfaces_.features() != params_.features)
        throw std::invalid_argument("initial interface state does not match params");
    cursors_.resize(static_cast<std::size_t>(num_edges_) * features_);
    in_heap_.assign(cursors_.size(), 0);
    rates_.resize(features_ + 1);
    thresholds_.resize(features_ + 1);
    rates_[0] = Rational{0};
    thresholds_[0] = 0.0;
    for (int j = 1; j <= features_; ++j) {
        rates_[j] = jump_rate(j, features_);
        thresholds_[j] = rates_[j].to_double();
        if (fault_ == Fault::half_rate) thresholds_[j] *= 0.5;
    }
    total_particles_ = interfaces_.total_particles();
    level_counts_.assign(features_, 0);
    for (int u = 0; u < num_edges_; ++u) {
        const int z = interfaces_.zeta(u);
        if (z == features_) ++frozen_edges_;
        else if (z > 0) ++active_edges_;
        for (int i = 0; i < features_; ++i)
            if (interfaces_.occupied(u, i)) {
                ++level_counts_[i];
                schedule(u, i);
            }
    }
    absorption_time_ = 0.0;
}

const VertexConfig& Engine::vertices() const {
    if (!config_) throw std::logic_error("no vertex state in interface mode");
    return *config_;
}

double Engine::peek_next_time() const {
    return queue_.empty() ? kInf : queue_.top().time;
}

bool Engine::done(const Horizon& horizon) const {
    if (exhausted()) return true;
    if (clock_ >= horizon.t_max) return true;
    if (events_ >= horizon.max_events) return true;
    if (horizon.until_absorption && absorbing()) return true;
    return false;
}

void Engine::schedule(int edge, int level) {
    const int k = key_index(edge, level);
    if (in_heap_[k]) return;
    Cursor& c = cursors_[k];
    const StreamKey key{edge, level};
    do {
        ++c.n;
        c.time += marks_.arrival_increment(key, c.n);
    } while (c.time <= clock_);
    queue_.push({c.time, edge, level});
    in_heap_[k] = 1;
}

void Engine::set_bit(int edge, int level, bool value) {
    const bool had = interfaces_.occupied(edge, level);
    if (had == value) return;
    const int z_old = interfaces_.zeta(edge);
    interfaces_.set(edge, level, value);
    const int z_new = interfaces_.zeta(edge);
    total_particles_ += value ? 1 : -1;
    level_counts_[level] += value ? 1 : -1;
    const auto active = [this](int z) { return z > 0 && z < features_; };
    active_edges_ += active(z_new) - active(z_old);
    frozen_edges_ += (z_new == features_) - (z_old == features_);
}

int Engine::step_edge(int edge, int dir) const {
    const int v = edge + dir;
    if (params_.topology == Topology::torus)
        return (v + num_edges_) % num_edges_;
    return (v >= 0 && v < num_edges_) ? v : -1;
}

void Engine::apply_vertex_update(int edge, int level, int dir, EventRecord& rec) {
    const int x = config_->left_vertex(edge);
    const int y = config_->right_vertex(edge);
    int receiver = dir > 0 ? y : x;
    int donor = dir > 0 ? x : y;
    if (fault_ == Fault::adopt_wrong_side) std::swap(receiver, donor);
    config_->set(receiver, level, config_->at(donor, level));

    // Only the two edges incident to the receiver can change at this level.
    const int target = step_edge(edge, fault_ == Fault::adopt_wrong_side ? -dir : dir);
    set_bit(edge, level, false);  // the pair now agrees at this level
    if (target < 0) {
        rec.kind = EventKind::killed;
        rec.target_edge = -1;
        return;
    }
    rec.target_edge = target;
    const int tx = config_->left_vertex(target);
    const int ty = config_->right_vertex(target);
    const bool was = interfaces_.occupied(target, level);
    const bool now = config_->at(tx, level) != config_->at(ty, level);
    set_bit(target, level, now);
    if (was && !now) {
        ++annihilations_;
        rec.kind = EventKind::annihilate;
    } else if (!was && now) {
        if (interfaces_.zeta(target) == features_) {
            ++freezings_;
            rec.kind = EventKind::freeze_forming;
        } else {
            rec.kind = EventKind::move;
        }
        schedule(target, level);
    } else {
        // q > 2 coalescence: the jumping particle merged into the occupant.
        rec.kind = EventKind::move;
    }
}

void Engine::apply_interface_jump(int edge, int level, int dir, EventRecord& rec) {
    int target = step_edge(edge, dir);
    if (fault_ == Fault::off_by_one_edge && target >= 0)
        target = step_edge(target, +1);
    set_bit(edge, level, false);
    if (target < 0) {
        rec.kind = EventKind::killed;
        rec.target_edge = -1;
        return;
    }
    rec.target_edge = target;
    if (interfaces_.occupied(target, level)) {
        if (fault_ == Fault::coalesce) {
            rec.kind = EventKind::move;
        } else {
            set_bit(target, level, false);
            ++annihilations_;
            rec.kind = EventKind::annihilate;
        }
    } else {
        set_bit(target, level, true);
        if (interfaces_.zeta(target) == features_) {
            ++freezings_;
            rec.kind = EventKind::freeze_forming;
        } else {
            rec.kind = EventKind::move;
        }
        schedule(target, level);
    }
}

EventRecord Engine::step() {
    if (queue_.empty())
        throw std::logic_error("step on an exhausted engine");
    const bool was_absorbing = absorbing();
    const QueueEntry entry = queue_.top();
    queue_.pop();
    clock_ = entry.time;
    ++events_;
    const int k = key_index(entry.edge, entry.level);
    in_heap_[k] = 0;

    EventRecord rec;
    rec.time = clock_;
    rec.edge = entry.edge;
    rec.level = entry.level;

    if (!interfaces_.occupied(entry.edge, entry.level)) {
        // Stale mark: the level emptied after this arrival was queued.
        rec.kind = EventKind::rejected;
        return rec;
    }

    rec.source_zeta = interfaces_.zeta(entry.edge);
    const StreamKey key{entry.edge, entry.level};
    const std::uint64_t n = cursors_[k].n;
    const double u = marks_.thinning_uniform(key, n);
    int dir = marks_.direction(key, n);
    if (fault_ == Fault::flip_direction) dir = -dir;
    rec.direction = dir;

    if (u > thresholds_[interfaces_.zeta(entry.edge)]) {
        rec.kind = EventKind::rejected;
        schedule(entry.edge, entry.level);
        return rec;
    }

    rec.accepted = true;
    if (mode_ == Mode::vertex)
        apply_vertex_update(entry.edge, entry.level, dir, rec);
    else
        apply_interface_jump(entry.edge, entry.level, dir, rec);

    if (!was_absorbing && absorbing()) absorption_time_ = clock_;
    return rec;
}

RunResult run(Engine& engine, const Horizon& horizon,
              std::span<const double> sample_times,
              const SnapshotFn& on_snapshot, const EventFn& on_event) {
    std::size_t next_sample = 0;
    const auto emit_through = [&](double limit) {
        while (next_sample < sample_times.size() &&
               sample_times[next_sample] <= limit &&
               sample_times[next_sample] <= horizon.t_max) {
            if (on_snapshot) on_snapshot(sample_times[next_sample], engine);
            ++next_sample;
        }
    };

    bool hit_event_budget = false;
    while (!engine.done(horizon)) {
        const double t_next = engine.peek_next_time();
        // State is constant on [clock, t_next); snapshots strictly before the
        // event see the pre-event state.
        while (next_sample < sample_times.size() &&
               sample_times[next_sample] < t_next &&
               sample_times[next_sample] <= horizon.t_max) {
            if (on_snapshot) on_snapshot(sample_times[next_sample], engine);
            ++next_sample;
        }
        if (t_next > horizon.t_max) break;
        const EventRecord rec = engine.step();
        if (on_event) on_event(rec);
        if (engine.events() >= horizon.max_events) hit_event_budget = true;
    }
    // Once absorbed (or off the lattice entirely) the state never changes
    // again, so the remaining sample times see it as-is.
    if (!hit_event_budget) emit_through(horizon.t_max);

    RunResult result;
    result.absorbed = engine.absorbing();
    result.t_abs = engine.absorption_time();
    result.final_time = std::min(std::max(engine.clock(), 0.0), horizon.t_max);
    if (!result.absorbed && engine.peek_next_time() > horizon.t_max &&
        horizon.t_max < kInf)
        result.final_time = horizon.t_max;
    result.events = engine.events();
    result.annihilations = engine.annihilation_count();
    result.freezings = engine.freezing_count();
    return result;
}

} // namespace axl
