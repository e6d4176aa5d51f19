#ifndef AXL_MODEL_HPP
#define AXL_MODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "axl/rational.hpp"

namespace axl {

enum class Topology { torus, path, killed_half_line };

std::string to_string(Topology t);
Topology topology_from_string(const std::string& s);

/// Stop rule for a single run. Any of the three conditions ends the run.
struct Horizon {
    double t_max = std::numeric_limits<double>::infinity();
    std::uint64_t max_events = std::numeric_limits<std::uint64_t>::max();
    bool until_absorption = true;
};

struct SystemParams {
    int features = 1;       // F
    int states = 2;         // q; q = 2 unlocks interface mode
    int size = 2;           // N vertices
    Topology topology = Topology::torus;
    std::uint64_t seed = 0;
    Horizon horizon;

    void validate() const;  // throws std::invalid_argument on violation
    int num_edges() const {
        return topology == Topology::torus ? size : size - 1;
    }
};

/// One vertex's culture: F feature states, each in {0, .., q-1}.
using Culture = std::vector<std::uint8_t>;

/// Culture map over the vertices of a finite 1D lattice.
class VertexConfig {
public:
    VertexConfig(int size, int features, int states, Topology topology);

    int size() const { return size_; }
    int features() const { return features_; }
    int states() const { return states_; }
    Topology topology() const { return topology_; }
    int num_edges() const {
        return topology_ == Topology::torus ? size_ : size_ - 1;
    }

    std::uint8_t at(int vertex, int level) const {
        return data_[static_cast<std::size_t>(vertex) * features_ + level];
    }
    void set(int vertex, int level, std::uint8_t value) {
        data_[static_cast<std::size_t>(vertex) * features_ + level] = value;
    }
    Culture culture(int vertex) const;
    void set_culture(int vertex, const Culture& c);

    // Endpoints of edge u (left, right); torus wraps.
    int left_vertex(int edge) const { return edge; }
    int right_vertex(int edge) const {
        return topology_ == Topology::torus ? (edge + 1) % size_ : edge + 1;
    }

    bool operator==(const VertexConfig&) const = default;

    void check_vertex(int v) const;
    void check_level(int i) const;
    void check_adjacent(int x, int y) const;  // throws if not nearest neighbors

private:
    int size_, features_, states_;
    Topology topology_;
    std::vector<std::uint8_t> data_;  // size_ * features_, vertex-major
};

/// Per-edge, per-level occupation of the interface system, plus per-edge
/// particle counts. Level i is bit i of the edge's mask (F <= 64).
class InterfaceState {
public:
    InterfaceState(int num_edges, int features, Topology topology);

    int num_edges() const { return static_cast<int>(masks_.size()); }
    int features() const { return features_; }
    Topology topology() const { return topology_; }

    bool occupied(int edge, int level) const {
        return (masks_[edge] >> level) & 1u;
    }
    void set(int edge, int level, bool value) {
        const std::uint64_t bit = std::uint64_t{1} << level;
        if (value && !(masks_[edge] & bit)) { masks_[edge] |= bit; ++zeta_[edge]; }
        else if (!value && (masks_[edge] & bit)) { masks_[edge] &= ~bit; --zeta_[edge]; }
    }
    std::uint64_t mask(int edge) const { return masks_[edge]; }
    int zeta(int edge) const { return zeta_[edge]; }
    std::uint64_t total_particles() const;

    bool operator==(const InterfaceState&) const = default;

private:
    int features_;
    Topology topology_;
    std::vector<std::uint64_t> masks_;
    std::vector<std::uint8_t> zeta_;
};

// ---- model operations (pure) ----

/// Fraction of features x and y agree on, as an exact rational.
Rational overlap(const VertexConfig& config, int x, int y);

/// Levels where x and y disagree (zero-based, ascending).
std::vector<int> discordant_levels(const VertexConfig& config, int x, int y);

/// Vertex x adopts feature i of vertex y; everything else unchanged.
VertexConfig apply_copy(const VertexConfig& config, int x, int y, int level);

/// Per-particle jump rate at a j-site: r(j) = 1/j - 1/F. r(F) = 0 (frozen).
Rational jump_rate(int occupancy, int features);

/// Directed per-feature copy rate for adjacent x, y at a discordant level:
/// (1/2F) * overlap/(1 - overlap); zero when the level agrees.
Rational copy_rate(const VertexConfig& config, int x, int y, int level);

/// Disagreement indicators along every edge of the lattice.
InterfaceState interface_view(const VertexConfig& config);

class MarkSource;  // randomness layer, see marks.hpp

/// i.i.d. uniform cultures over {0,..,q-1}^F, deterministic given the seed.
VertexConfig sample_initial(const SystemParams& params, const MarkSource& entropy);

/// All vertices share the given culture (defaults to all-zero).
VertexConfig monoculture(const SystemParams& params);

// Plain-text serialization: one line per vertex, comma-separated features.
void write_config(std::ostream& os, const VertexConfig& config);
// One line per edge, F bits, level 0 first.
void write_interfaces(std::ostream& os, const InterfaceState& state);

} // namespace axl

#endif
