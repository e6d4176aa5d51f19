#include "axl/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace axl {

namespace {

// Runs fn(job) for job in [0, jobs) across `workers` threads. Each job owns
// its output slot, so the merge is independent of scheduling.
void run_parallel(int jobs, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1 || jobs <= 1) {
        for (int j = 0; j < jobs; ++j) fn(j);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int n = std::min(workers, jobs);
    pool.reserve(n);
    for (int w = 0; w < n; ++w)
        pool.emplace_back([&] {
            for (int j = next.fetch_add(1); j < jobs; j = next.fetch_add(1)) fn(j);
        });
    for (auto& t : pool) t.join();
}

void mean_se(const std::vector<double>& xs, double& mean, double& se) {
    const auto n = static_cast<double>(xs.size());
    mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    se = xs.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
}

} // namespace

std::vector<int> parity_vector(const InterfaceState& state) {
    return parity_vector(state, 0, state.num_edges() - 1);
}

std::vector<int> parity_vector(const InterfaceState& state, int u, int v) {
    if (u < 0 || v >= state.num_edges() || u > v)
        throw std::invalid_argument("bad edge interval");
    std::vector<int> parity(state.features(), 0);
    for (int w = u; w <= v; ++w)
        for (int i = 0; i < state.features(); ++i)
            parity[i] ^= state.occupied(w, i) ? 1 : 0;
    return parity;
}

bool active_interval(const InterfaceState& state, int u, int v) {
    if (state.features() < 2) return false;
    const auto parity = parity_vector(state, u, v);
    for (std::size_t i = 1; i < parity.size(); ++i)
        if (parity[i] != parity[0]) return true;
    return false;
}

std::vector<int> domain_lengths(const VertexConfig& config) {
    const int n = config.size();
    std::vector<int> lengths;
    int run = 1;
    for (int v = 1; v < n; ++v) {
        bool same = true;
        for (int i = 0; i < config.features() && same; ++i)
            same = config.at(v, i) == config.at(v - 1, i);
        if (same) ++run;
        else { lengths.push_back(run); run = 1; }
    }
    lengths.push_back(run);
    if (config.topology() == Topology::torus && lengths.size() > 1) {
        bool wrap = true;
        for (int i = 0; i < config.features() && wrap; ++i)
            wrap = config.at(0, i) == config.at(n - 1, i);
        if (wrap) {
            lengths.front() += lengths.back();
            lengths.pop_back();
        }
    }
    return lengths;
}

int s_max(const VertexConfig& config) {
    const auto lengths = domain_lengths(config);
    return *std::max_element(lengths.begin(), lengths.end());
}

int n_c(const VertexConfig& config) {
    return static_cast<int>(domain_lengths(config).size());
}

int annihilation_site(const EventRecord& rec) {
    if (rec.kind != EventKind::annihilate)
        throw std::invalid_argument("not an annihilation event");
    // The colliding pair is (edge, target); the site is the left edge.
    return rec.direction > 0 ? rec.edge : rec.target_edge;
}

EventCounters count_events(std::span<const EventRecord> log, Topology topology,
                           int num_edges) {
    (void)topology;
    EventCounters counters;
    counters.annihilations.assign(num_edges, 0);
    counters.freezings.assign(num_edges, 0);
    for (const auto& rec : log) {
        if (rec.kind == EventKind::annihilate)
            ++counters.annihilations[annihilation_site(rec)];
        else if (rec.kind == EventKind::freeze_forming)
            ++counters.freezings[rec.target_edge];
    }
    return counters;
}

int freezing_separation_violations(std::span<const EventRecord> log,
                                   Topology topology, int num_edges) {
    std::vector<char> seen(num_edges, 0), unlocked(num_edges, 0);
    int violations = 0;
    for (const auto& rec : log) {
        if (rec.kind == EventKind::annihilate) {
            const int site = annihilation_site(rec);
            unlocked[site] = 1;
            // An annihilation at site s also frees its right neighbor s+1.
            if (topology == Topology::torus)
                unlocked[(site + 1) % num_edges] = 1;
            else if (site + 1 < num_edges)
                unlocked[site + 1] = 1;
        } else if (rec.kind == EventKind::freeze_forming) {
            const int u = rec.target_edge;
            if (seen[u] && !unlocked[u]) ++violations;
            seen[u] = 1;
            unlocked[u] = 0;
        }
    }
    return violations;
}

DensitySeries density_series(const SystemParams& params, int replicas,
                             std::span<const double> sample_times, int workers) {
    params.validate();
    if (replicas < 2) throw std::invalid_argument("need at least 2 replicas for SEs");
    const int t_count = static_cast<int>(sample_times.size());
    // rows[r] holds, per sample time, the five spatial averages.
    struct Row { std::vector<double> zeta, active, frozen, p_frozen, p_active; };
    std::vector<Row> rows(replicas);

    std::vector<double> times(sample_times.begin(), sample_times.end());
    run_parallel(replicas, workers, [&](int r) {
        SystemParams local = params;
        local.seed = derive_seed(params.seed, static_cast<std::uint64_t>(r));
        MarkSource entropy(local.seed);
        Engine engine(local, sample_initial(local, entropy));
        Row& row = rows[r];
        Horizon horizon = local.horizon;
        horizon.t_max = std::min(horizon.t_max, times.empty() ? 0.0 : times.back());
        run(engine, horizon, times, [&](double, const Engine& e) {
            const double edges = e.params().num_edges();
            double z = 0, act = 0, frz = 0, pf = 0, pa = 0;
            for (int u = 0; u < e.params().num_edges(); ++u) {
                const int zu = e.zeta(u);
                z += zu;
                if (zu == e.params().features) { frz += zu; pf += 1; }
                else if (zu > 0) { act += zu; pa += 1; }
            }
            row.zeta.push_back(z / edges);
            row.active.push_back(act / edges);
            row.frozen.push_back(frz / edges);
            row.p_frozen.push_back(pf / edges);
            row.p_active.push_back(pa / edges);
        });
        if (static_cast<int>(row.zeta.size()) != t_count)
            throw std::logic_error("snapshot count mismatch");
    });

    DensitySeries series;
    series.times = times;
    const auto collect = [&](auto member, std::vector<double>& mean_out,
                             std::vector<double>& se_out) {
        for (int t = 0; t < t_count; ++t) {
            std::vector<double> xs(replicas);
            for (int r = 0; r < replicas; ++r) xs[r] = (rows[r].*member)[t];
            double m, s;
            mean_se(xs, m, s);
            mean_out.push_back(m);
            se_out.push_back(s);
        }
    };
    collect(&Row::zeta, series.mean_zeta, series.se_zeta);
    collect(&Row::active, series.active, series.se_active);
    collect(&Row::frozen, series.frozen, series.se_frozen);
    collect(&Row::p_frozen, series.p_frozen, series.se_p_frozen);
    collect(&Row::p_active, series.p_active, series.se_p_active);
    return series;
}

std::vector<SurvivalPoint> frozen_release_probe(const SystemParams& params,
                                                std::span<const double> horizons,
                                                int replicas, int workers) {
    params.validate();
    if (params.topology != Topology::killed_half_line)
        throw std::invalid_argument("probe requires the killed-half-line topology");
    if (params.features < 2)
        throw std::invalid_argument("probe requires F >= 2 (F = 1 freezes everything)");
    if (horizons.empty() || !std::is_sorted(horizons.begin(), horizons.end()))
        throw std::invalid_argument("horizons must be ascending");
    const double t_last = horizons.back();

    std::vector<double> release(replicas);  // first time edge 0 stops being an F-site
    run_parallel(replicas, workers, [&](int r) {
        SystemParams local = params;
        local.seed = derive_seed(params.seed, static_cast<std::uint64_t>(r));
        MarkSource entropy(local.seed);
        InterfaceState init(local.num_edges(), local.features, local.topology);
        for (int i = 0; i < local.features; ++i) init.set(0, i, true);
        for (int u = 1; u < local.num_edges(); ++u)
            for (int i = 0; i < local.features; ++i)
                init.set(u, i, entropy.aux_uniform({u, i}, 0) < 0.5);
        Engine engine(local, std::move(init));
        Horizon h;
        h.t_max = t_last;
        double tau = std::numeric_limits<double>::infinity();
        while (!engine.done(h)) {
            if (engine.peek_next_time() > t_last) break;
            engine.step();
            if (engine.zeta(0) != engine.params().features) {
                tau = engine.clock();
                break;
            }
        }
        release[r] = tau;
    });

    std::vector<SurvivalPoint> table;
    for (double t : horizons) {
        int alive = 0;
        for (double tau : release) alive += tau > t;
        const double p = static_cast<double>(alive) / replicas;
        table.push_back({t, p, std::sqrt(p * (1 - p) / replicas), replicas});
    }
    return table;
}

double exact_mean_nc_single_feature(int size) {
    return size / 2.0 + std::pow(2.0, 1 - size);
}

} // namespace axl
