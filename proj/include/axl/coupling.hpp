#ifndef AXL_COUPLING_HPP
#define AXL_COUPLING_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "axl/engine.hpp"
#include "axl/model.hpp"

namespace axl {

struct Divergence {
    double time = 0.0;
    int edge = -1;
    int level = -1;
};

struct CouplingReport {
    std::uint64_t events_compared = 0;
    std::optional<Divergence> first_divergence;
    double max_clock = 0.0;
    bool pass = false;  // pass <=> no divergence
    std::string to_json() const;
};

/// Runs the vertex chain and the interface chain on the same mark stream
/// from matched initial conditions (the interface engine starts from the
/// interface view of the sampled culture map) and compares the interface
/// view bit-for-bit after every event. `fault` mutates one engine:
/// vertex-side faults (adopt_wrong_side) hit the vertex engine, all others
/// the interface engine. Requires q = 2.
CouplingReport couple_run(const SystemParams& params, const Horizon& horizon,
                          Fault fault = Fault::none,
                          const VertexConfig* initial = nullptr);

struct RateAuditRow {
    int occupancy = 0;          // j
    std::uint64_t trials = 0;   // marks landing on occupied levels of j-sites
    std::uint64_t accepted = 0;
    double empirical = 0.0;
    double expected = 0.0;      // r(j)
    double ci_low = 0.0, ci_high = 0.0;  // Wilson 99% CI
    bool sufficient = false;
    bool ok = false;            // expected inside CI (or trivially, j = F: zero)
};

/// Empirical per-particle acceptance fraction per occupancy class, from
/// interface-mode runs over as many derived-seed replicas as needed to
/// reach `min_trials` for every class with 0 < j < F. Requires q = 2.
std::vector<RateAuditRow> rate_audit(const SystemParams& params,
                                     std::uint64_t min_trials,
                                     std::uint64_t max_total_events = 100000000);

/// Wilson score interval for a binomial proportion.
void wilson_interval(std::uint64_t successes, std::uint64_t trials, double z,
                     double& low, double& high);

} // namespace axl

#endif
