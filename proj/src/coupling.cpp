#include "axl/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace axl {

std::string CouplingReport::to_json() const {
    nlohmann::json j;
    j["events_compared"] = events_compared;
    j["max_clock"] = max_clock;
    j["pass"] = pass;
    if (first_divergence) {
        j["first_divergence"] = {{"time", first_divergence->time},
                                 {"edge", first_divergence->edge},
                                 {"level", first_divergence->level}};
    } else {
        j["first_divergence"] = nullptr;
    }
    return j.dump(2);
}

CouplingReport couple_run(const SystemParams& params, const Horizon& horizon,
                          Fault fault, const VertexConfig* override_initial) {
    params.validate();
    if (params.states != 2)
        throw std::invalid_argument("coupling requires q = 2");
    if (params.topology == Topology::killed_half_line)
        throw std::invalid_argument("coupling requires a vertex-chain topology");

    MarkSource entropy(params.seed);
    const VertexConfig initial =
        override_initial ? *override_initial : sample_initial(params, entropy);
    // The fault mutates exactly one side of the pair.
    const Fault vertex_fault =
        fault == Fault::adopt_wrong_side ? fault : Fault::none;
    const Fault interface_fault =
        fault == Fault::adopt_wrong_side ? Fault::none : fault;
    Engine vertex_engine(params, initial, vertex_fault);
    Engine walk_engine(params, interface_view(initial), interface_fault);

    CouplingReport report;
    while (!vertex_engine.done(horizon) && !walk_engine.done(horizon)) {
        vertex_engine.step();
        walk_engine.step();
        ++report.events_compared;
        report.max_clock = std::max(vertex_engine.clock(), walk_engine.clock());
        if (!(vertex_engine.interfaces() == walk_engine.interfaces())) {
            Divergence d;
            d.time = report.max_clock;
            const auto& a = vertex_engine.interfaces();
            const auto& b = walk_engine.interfaces();
            for (int u = 0; u < a.num_edges() && d.edge < 0; ++u)
                for (int i = 0; i < a.features(); ++i)
                    if (a.occupied(u, i) != b.occupied(u, i)) {
                        d.edge = u;
                        d.level = i;
                        break;
                    }
            report.first_divergence = d;
            break;
        }
    }
    report.pass = !report.first_divergence.has_value();
    return report;
}

void wilson_interval(std::uint64_t successes, std::uint64_t trials, double z,
                     double& low, double& high) {
    if (trials == 0) { low = 0.0; high = 1.0; return; }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    low = center - half;
    high = center + half;
}

std::vector<RateAuditRow> rate_audit(const SystemParams& params,
                                     std::uint64_t min_trials,
                                     std::uint64_t max_total_events) {
    params.validate();
    if (params.states != 2)
        throw std::invalid_argument("rate audit requires q = 2");
    const int f = params.features;
    std::vector<std::uint64_t> trials(f + 1, 0), accepted(f + 1, 0);

    std::uint64_t total_events = 0;
    const auto satisfied = [&] {
        for (int j = 1; j < f; ++j)
            if (trials[j] < min_trials) return false;
        return true;
    };

    for (std::uint64_t replica = 0; !satisfied() && total_events < max_total_events;
         ++replica) {
        SystemParams local = params;
        local.seed = derive_seed(params.seed, replica);
        MarkSource entropy(local.seed);
        Engine engine(local, interface_view(sample_initial(local, entropy)));
        Horizon h = local.horizon;
        while (!engine.done(h) && total_events < max_total_events) {
            const EventRecord rec = engine.step();
            ++total_events;
            if (rec.source_zeta > 0) {
                ++trials[rec.source_zeta];
                if (rec.accepted) ++accepted[rec.source_zeta];
            }
        }
    }

    constexpr double z99 = 2.5758293035489004;  // two-sided 99%
    std::vector<RateAuditRow> rows;
    for (int j = 1; j <= f; ++j) {
        RateAuditRow row;
        row.occupancy = j;
        row.trials = trials[j];
        row.accepted = accepted[j];
        row.empirical = trials[j] ? static_cast<double>(accepted[j]) / trials[j] : 0.0;
        row.expected = jump_rate(j, f).to_double();
        wilson_interval(accepted[j], trials[j], z99, row.ci_low, row.ci_high);
        row.sufficient = trials[j] >= min_trials;
        if (j == f)
            row.ok = accepted[j] == 0;  // frozen sites never accept
        else
            row.ok = row.sufficient && row.ci_low <= row.expected &&
                     row.expected <= row.ci_high;
        rows.push_back(row);
    }
    return rows;
}

} // namespace axl
