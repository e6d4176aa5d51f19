#ifndef AXL_STATS_HPP
#define AXL_STATS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "axl/engine.hpp"
#include "axl/model.hpp"

namespace axl {

/// Absorption-state summary of one replica.
struct AbsorptionRecord {
    std::uint64_t replica = 0;
    std::uint64_t seed = 0;
    int features = 0, states = 0, size = 0;
    Topology topology = Topology::torus;
    int s_max = 0;
    int n_c = 0;
    double t_abs = 0.0;
    bool censored = false;  // horizon hit before absorption
    std::uint64_t annihilations = 0;
    std::uint64_t freezings = 0;
};

/// Replica-averaged occupancy series with Monte Carlo standard errors.
/// Estimator: spatial average within each replica, then mean +- SE across
/// replicas.
struct DensitySeries {
    std::vector<double> times;
    std::vector<double> mean_zeta, se_zeta;
    std::vector<double> active, se_active;    // E(zeta 1{zeta != F})
    std::vector<double> frozen, se_frozen;    // E(zeta 1{zeta == F})
    std::vector<double> p_frozen, se_p_frozen;    // P(zeta = F)
    std::vector<double> p_active, se_p_active;    // P(0 < zeta < F)
};

/// Per-edge event counters: annihilations indexed by the left edge of the
/// colliding pair, freezings by the edge that filled up.
struct EventCounters {
    std::vector<std::uint64_t> annihilations;
    std::vector<std::uint64_t> freezings;
};

/// Per-level particle count mod 2 over the whole edge set.
std::vector<int> parity_vector(const InterfaceState& state);
/// Same, restricted to edges u..v inclusive.
std::vector<int> parity_vector(const InterfaceState& state, int u, int v);

/// True iff two levels' particle counts over edges u..v differ in parity.
/// Always false for F = 1.
bool active_interval(const InterfaceState& state, int u, int v);

/// Lengths of the maximal monocultural runs, cyclic on the torus.
/// Monoculture yields a single run of length N.
std::vector<int> domain_lengths(const VertexConfig& config);
int s_max(const VertexConfig& config);
int n_c(const VertexConfig& config);

/// Folds an event log into per-edge counters.
EventCounters count_events(std::span<const EventRecord> log, Topology topology,
                           int num_edges);

/// Annihilation site of an accepted collision: the left edge of the pair.
int annihilation_site(const EventRecord& rec);

/// Checks that consecutive freezing events at any edge are separated by an
/// annihilation at that edge or its left neighbor (cyclic on the torus).
/// Returns the number of violations.
int freezing_separation_violations(std::span<const EventRecord> log,
                                   Topology topology, int num_edges);

/// Runs `replicas` independent copies (derived seeds) and aggregates the
/// occupancy series at the given sample times.
DensitySeries density_series(const SystemParams& params, int replicas,
                             std::span<const double> sample_times,
                             int workers = 1);

/// One row of the frozen-edge release table.
struct SurvivalPoint {
    double horizon = 0.0;
    double survival = 0.0;  // P(left-most edge still an F-site through T)
    double se = 0.0;
    int replicas = 0;
};

/// Killed half-line, q = 2, F >= 2: the left-most edge starts with all F
/// levels occupied, every other level is Bernoulli(1/2). Measures the
/// probability the left-most edge has not yet been hit at each horizon.
std::vector<SurvivalPoint> frozen_release_probe(const SystemParams& params,
                                                std::span<const double> horizons,
                                                int replicas, int workers = 1);

/// Exact E(n_c) for the F = 1, q = 2 torus: N/2 + 2^(1-N).
double exact_mean_nc_single_feature(int size);

} // namespace axl

#endif
