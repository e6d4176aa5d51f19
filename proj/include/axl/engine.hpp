#ifndef AXL_ENGINE_HPP
#define AXL_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "axl/marks.hpp"
#include "axl/model.hpp"

namespace axl {

enum class Mode { vertex, interface_walks };

/// Seeded mutations for fault-injection tests. `none` is the real dynamics.
enum class Fault {
    none,
    half_rate,         // acceptance threshold r(j)/2
    flip_direction,    // jump direction negated
    coalesce,          // collisions keep the target particle
    adopt_wrong_side,  // vertex mode: the donor updates instead of the receiver
    off_by_one_edge,   // interface mode: jump lands one edge too far right
};

enum class EventKind { move, annihilate, freeze_forming, rejected, killed };

struct EventRecord {
    double time = 0.0;
    int edge = 0;          // source edge of the mark
    int level = 0;
    int direction = 0;     // 0 for rejected marks
    int target_edge = -1;  // destination edge, -1 if none
    int source_zeta = 0;   // zeta(edge) just before the event; 0 for stale marks
    bool accepted = false;
    EventKind kind = EventKind::rejected;
};

/// Event-driven simulator. One rate-1 clock per (edge, level); a mark is
/// accepted when the level carries a particle and its uniform is at most
/// r(zeta). Only occupied levels are kept scheduled; a clock whose level
/// empties fires one last stale mark (a rejection) and is then resumed
/// from the current time if the level refills.
class Engine {
public:
    // Vertex mode, any q.
    Engine(const SystemParams& params, VertexConfig initial, Fault fault = Fault::none);
    // Interface mode, q = 2 semantics (annihilation on collision).
    Engine(const SystemParams& params, InterfaceState initial, Fault fault = Fault::none);

    EventRecord step();                 // throws std::logic_error if exhausted()
    bool exhausted() const { return queue_.empty(); }
    bool done(const Horizon& horizon) const;

    double clock() const { return clock_; }
    std::uint64_t events() const { return events_; }
    Mode mode() const { return mode_; }
    const SystemParams& params() const { return params_; }

    bool absorbing() const { return active_edges_ == 0; }
    double absorption_time() const { return absorption_time_; }

    const InterfaceState& interfaces() const { return interfaces_; }
    const VertexConfig& vertices() const;  // vertex mode only

    int zeta(int edge) const { return interfaces_.zeta(edge); }
    std::uint64_t total_particles() const { return total_particles_; }
    int active_edges() const { return active_edges_; }
    int frozen_edges() const { return frozen_edges_; }
    std::uint64_t level_count(int level) const { return level_counts_[level]; }

    std::uint64_t annihilation_count() const { return annihilations_; }
    std::uint64_t freezing_count() const { return freezings_; }

    /// Earliest pending mark time; infinity when exhausted.
    double peek_next_time() const;

private:
    struct QueueEntry {
        double time;
        int edge;
        int level;
        // Ties (impossible in exact continuous time) break by (edge, level).
        bool operator>(const QueueEntry& o) const {
            if (time != o.time) return time > o.time;
            if (edge != o.edge) return edge > o.edge;
            return level > o.level;
        }
    };
    struct Cursor {
        std::uint64_t n = 0;  // last generated arrival index
        double time = 0.0;    // its arrival time
    };

    int key_index(int edge, int level) const { return edge * features_ + level; }
    void schedule(int edge, int level);
    void on_gain(int edge, int level);   // particle appeared at (edge, level)
    void set_bit(int edge, int level, bool value);  // updates all counters
    int step_edge(int edge, int dir) const;         // -1 when off the lattice
    void apply_vertex_update(int edge, int level, int dir, EventRecord& rec);
    void apply_interface_jump(int edge, int level, int dir, EventRecord& rec);

    SystemParams params_;
    Mode mode_;
    Fault fault_;
    int features_;
    int num_edges_;
    MarkSource marks_;

    std::optional<VertexConfig> config_;
    InterfaceState interfaces_;

    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue_;
    std::vector<Cursor> cursors_;
    std::vector<char> in_heap_;

    double clock_ = 0.0;
    std::uint64_t events_ = 0;
    std::uint64_t total_particles_ = 0;
    int active_edges_ = 0;   // edges with 0 < zeta < F
    int frozen_edges_ = 0;   // edges with zeta == F
    std::vector<std::uint64_t> level_counts_;
    std::uint64_t annihilations_ = 0;
    std::uint64_t freezings_ = 0;
    double absorption_time_ = 0.0;
    std::vector<Rational> rates_;         // r(j), j = 0..F
    std::vector<double> thresholds_;      // acceptance thresholds as doubles
};

struct RunResult {
    bool absorbed = false;
    double t_abs = 0.0;
    double final_time = 0.0;
    std::uint64_t events = 0;
    std::uint64_t annihilations = 0;
    std::uint64_t freezings = 0;
};

using SnapshotFn = std::function<void(double, const Engine&)>;
using EventFn = std::function<void(const EventRecord&)>;

/// Steps the engine until the horizon fires. Snapshots are taken at the
/// given strictly increasing sample times (state held constant between
/// events); once absorbed, remaining sample times see the frozen state.
RunResult run(Engine& engine, const Horizon& horizon,
              std::span<const double> sample_times = {},
              const SnapshotFn& on_snapshot = nullptr,
              const EventFn& on_event = nullptr);

} // namespace axl

#endif
