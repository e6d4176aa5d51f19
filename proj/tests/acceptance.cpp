// Acceptance suite: one criterion per numeric argument (1..9), all by default.
// Prints one [PASS]/[FAIL] line per criterion; exit 0 iff everything passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "axl/coupling.hpp"
#include "axl/engine.hpp"
#include "axl/marks.hpp"
#include "axl/model.hpp"
#include "axl/stats.hpp"

using namespace axl;

namespace {

SystemParams base_params(int f, int q, int n, std::uint64_t seed,
                         Topology topology = Topology::torus) {
    SystemParams p;
    p.features = f;
    p.states = q;
    p.size = n;
    p.topology = topology;
    p.seed = seed;
    return p;
}

// 1. Directed generator rate summed over both directions equals
//    r(j) = 1/j - 1/F exactly, for all F in 1..8, j in 1..F.
bool criterion_rate_identity(std::string& detail) {
    for (int f = 1; f <= 8; ++f)
        for (int j = 1; j <= f; ++j) {
            Culture a(f, 0), b(f, 0);
            for (int i = 0; i < j; ++i) b[i] = 1;
            VertexConfig config(2, f, 2, Topology::path);
            config.set_culture(0, a);
            config.set_culture(1, b);
            const Rational directed = copy_rate(config, 0, 1, 0);
            const Rational reverse = copy_rate(config, 1, 0, 0);
            if (directed + reverse != jump_rate(j, f)) {
                detail = "mismatch at F=" + std::to_string(f) + " j=" + std::to_string(j);
                return false;
            }
        }
    detail = "36 (F, j) pairs, exact rational arithmetic";
    return true;
}

// 2. Coupling oracle sweep plus fault injection.
bool criterion_coupling(std::string& detail) {
    Horizon h;
    h.max_events = 100000;
    int clean_runs = 0;
    for (int n : {8, 16})
        for (int f : {2, 3, 5})
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                const auto report = couple_run(base_params(f, 2, n, seed), h);
                ++clean_runs;
                if (!report.pass) {
                    detail = "divergence at N=" + std::to_string(n) +
                             " F=" + std::to_string(f) + " seed=" + std::to_string(seed);
                    return false;
                }
            }

    Horizon fault_h;
    fault_h.max_events = 10000;
    const Fault faults[] = {Fault::half_rate, Fault::flip_direction, Fault::coalesce,
                            Fault::adopt_wrong_side, Fault::off_by_one_edge};
    const char* names[] = {"half-rate", "flip-direction", "coalesce",
                           "adopt-wrong-side", "off-by-one-edge"};
    std::string counts;
    for (int k = 0; k < 5; ++k) {
        int detected = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed)
            detected += !couple_run(base_params(3, 2, 16, seed), fault_h, faults[k]).pass;
        counts += std::string(counts.empty() ? "" : ", ") + names[k] + "=" +
                  std::to_string(detected);
        if (detected < 95) {
            detail = std::string("fault ") + names[k] + " detected on only " +
                     std::to_string(detected) + "/100 seeds";
            return false;
        }
    }
    detail = std::to_string(clean_runs) + " clean runs, 0 divergences; detections: " + counts;
    return true;
}

// 3. Empirical acceptance per occupancy class, F = 3.
bool criterion_rate_audit(std::string& detail) {
    SystemParams p = base_params(3, 2, 600, 12);
    p.horizon.max_events = 2000000;
    const auto rows = rate_audit(p, 10000);
    for (const auto& row : rows) {
        if (row.occupancy < 3) {
            if (!row.sufficient) {
                detail = "insufficient trials for j=" + std::to_string(row.occupancy);
                return false;
            }
            if (!row.ok) {
                detail = "r(" + std::to_string(row.occupancy) + ")=" +
                         std::to_string(row.expected) + " outside Wilson 99% CI [" +
                         std::to_string(row.ci_low) + ", " + std::to_string(row.ci_high) + "]";
                return false;
            }
        } else if (row.accepted != 0) {
            detail = "frozen site accepted " + std::to_string(row.accepted) + " jumps";
            return false;
        }
    }
    detail = "j=1: " + std::to_string(rows[0].trials) + " trials, j=2: " +
             std::to_string(rows[1].trials) + " trials, j=3: 0 acceptances of " +
             std::to_string(rows[2].trials);
    return true;
}

// Shared 10^5-event q=2 torus trajectory for criteria 4 and 5.
std::vector<EventRecord> pathwise_log(std::uint64_t base_seed, bool* invariants_ok,
                                      std::string* why) {
    std::vector<EventRecord> log;
    if (invariants_ok) *invariants_ok = true;
    for (std::uint64_t replica = 0; log.size() < 100000; ++replica) {
        SystemParams p = base_params(3, 2, 200, derive_seed(base_seed, replica));
        MarkSource entropy(p.seed);
        Engine engine(p, sample_initial(p, entropy));
        Horizon h;
        h.max_events = 100000;
        std::uint64_t prev = engine.total_particles();
        while (!engine.done(h) && log.size() < 100000) {
            const EventRecord rec = engine.step();
            log.push_back(rec);
            if (!invariants_ok) continue;
            const std::uint64_t now = engine.total_particles();
            const auto delta =
                static_cast<std::int64_t>(now) - static_cast<std::int64_t>(prev);
            prev = now;
            if (delta != 0 && delta != -2) {
                *invariants_ok = false;
                *why = "particle count changed by " + std::to_string(delta);
                return log;
            }
            for (int i = 0; i < 3; ++i)
                if (engine.level_count(i) % 2 != 0) {
                    *invariants_ok = false;
                    *why = "nonzero parity at level " + std::to_string(i);
                    return log;
                }
            if (!(engine.interfaces() == interface_view(engine.vertices()))) {
                *invariants_ok = false;
                *why = "interface view out of sync at t=" + std::to_string(rec.time);
                return log;
            }
        }
    }
    return log;
}

// 4. Pathwise invariants on 10^5 events (q=2, F=3, N=200 torus).
bool criterion_pathwise(std::string& detail) {
    bool ok = true;
    std::string why;
    const auto log = pathwise_log(2024, &ok, &why);
    if (!ok) {
        detail = why;
        return false;
    }
    detail = std::to_string(log.size()) +
             " events: parity zero, deltas in {0,-2}, view consistent";
    return true;
}

// 5. Freezing events separated by annihilations at u or u-1.
bool criterion_freezing_separation(std::string& detail) {
    const auto log = pathwise_log(4048, nullptr, nullptr);
    const int violations =
        freezing_separation_violations(log, Topology::torus, 200);
    detail = std::to_string(log.size()) + " events, " + std::to_string(violations) +
             " violations";
    return violations == 0;
}

// 6. Extinction trends at N = 600 over 30 replicas.
bool criterion_extinction(std::string& detail) {
    const std::vector<double> times{100.0, 1000.0, 10000.0};
    for (int f : {2, 3}) {
        SystemParams p = base_params(f, 2, 600, 7);
        const auto series = density_series(p, 30, times, 1);
        const double p_active_late = series.p_active.back();
        if (!(p_active_late < 0.05)) {
            detail = "F=" + std::to_string(f) + ": P(0<zeta<F) at t=1e4 is " +
                     std::to_string(p_active_late);
            return false;
        }
        for (int k = 0; k < 2; ++k) {
            const double drop = series.p_frozen[k] - series.p_frozen[k + 1];
            const double se = std::sqrt(series.se_p_frozen[k] * series.se_p_frozen[k] +
                                        series.se_p_frozen[k + 1] * series.se_p_frozen[k + 1]);
            if (!(drop > 2 * se)) {
                detail = "F=" + std::to_string(f) + ": P(zeta=F) drop over decade " +
                         std::to_string(k) + " is " + std::to_string(drop) +
                         " vs 2SE=" + std::to_string(2 * se);
                return false;
            }
        }
    }
    detail = "P(active) < 0.05 at t=1e4 and P(frozen) decreasing over the last "
             "two decades for F=2 and F=3";
    return true;
}

// 7. Frozen-edge release survival strictly decreasing.
bool criterion_release_probe(std::string& detail) {
    SystemParams p = base_params(3, 2, 1001, 3, Topology::killed_half_line);
    const std::vector<double> horizons{10.0, 100.0, 1000.0};
    const auto table = frozen_release_probe(p, horizons, 1000, 1);
    detail.clear();
    for (const auto& row : table)
        detail += "S(" + std::to_string(static_cast<int>(row.horizon)) + ")=" +
                  std::to_string(row.survival) + " ";
    for (std::size_t k = 0; k + 1 < table.size(); ++k) {
        const double drop = table[k].survival - table[k + 1].survival;
        const double se = std::sqrt(table[k].se * table[k].se +
                                    table[k + 1].se * table[k + 1].se);
        if (!(drop > 2 * se)) {
            detail += "(drop " + std::to_string(drop) + " not beyond 2SE=" +
                      std::to_string(2 * se) + ")";
            return false;
        }
    }
    return true;
}

struct CellStats {
    double mean_smax = 0;
    double mean_smax_over_n = 0;
    double mean_nc_over_n = 0;
};

CellStats sweep_cell(int f, int q, int n, int replicas) {
    CellStats out;
    for (int r = 0; r < replicas; ++r) {
        SystemParams p = base_params(f, q, n, derive_seed(606, r));
        p.horizon.t_max = 1e8;
        p.horizon.max_events = 200000000;
        MarkSource entropy(p.seed);
        Engine engine(p, sample_initial(p, entropy));
        run(engine, p.horizon);
        const int sm = s_max(engine.vertices());
        const int nc = n_c(engine.vertices());
        out.mean_smax += sm;
        out.mean_smax_over_n += static_cast<double>(sm) / n;
        out.mean_nc_over_n += static_cast<double>(nc) / n;
    }
    out.mean_smax /= replicas;
    out.mean_smax_over_n /= replicas;
    out.mean_nc_over_n /= replicas;
    return out;
}

// 8. Qualitative phase behavior between N = 200 and N = 600.
bool criterion_phase_sweep(std::string& detail) {
    const int replicas = 30;

    // F > q: largest monocultural interval scales with N.
    const CellStats a200 = sweep_cell(3, 2, 200, replicas);
    const CellStats a600 = sweep_cell(3, 2, 600, replicas);
    const double ratio_frac = a200.mean_smax_over_n / a600.mean_smax_over_n;
    if (ratio_frac > 1.5 || ratio_frac < 1.0 / 1.5) {
        detail = "s_max/N ratio (F=3,q=2) across sizes is " + std::to_string(ratio_frac);
        return false;
    }

    // F < q: largest interval stays bounded.
    const CellStats b200 = sweep_cell(2, 3, 200, replicas);
    const CellStats b600 = sweep_cell(2, 3, 600, replicas);
    const double growth = b600.mean_smax / b200.mean_smax;
    if (growth > 1.5) {
        detail = "s_max grew by " + std::to_string(growth) + "x (F=2,q=3)";
        return false;
    }

    // F < c*q: domain count scales with N.
    const CellStats c200 = sweep_cell(2, 4, 200, replicas);
    const CellStats c600 = sweep_cell(2, 4, 600, replicas);
    if (c200.mean_nc_over_n < 0.05 || c600.mean_nc_over_n < 0.05) {
        detail = "n_c/N (F=2,q=4) = " + std::to_string(c200.mean_nc_over_n) + " / " +
                 std::to_string(c600.mean_nc_over_n);
        return false;
    }

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "s_max/N(3,2): %.3f vs %.3f; s_max(2,3): %.2f vs %.2f; "
                  "n_c/N(2,4): %.3f / %.3f",
                  a200.mean_smax_over_n, a600.mean_smax_over_n, b200.mean_smax,
                  b600.mean_smax, c200.mean_nc_over_n, c600.mean_nc_over_n);
    detail = buf;
    return true;
}

// 9. Simulated mean n_c at F=1, q=2, N=20 against the exact expectation.
//    Oracle: each of the N edges is a cultural boundary independently with
//    probability 1/2 and n_c = #boundaries unless there are none (then 1),
//    so E(n_c) = N/2 + 2^(1-N). Verified by exhaustive enumeration for
//    N <= 12, then evaluated analytically at N = 20.
bool criterion_exact_nc(std::string& detail) {
    for (int n = 3; n <= 12; ++n) {
        double total = 0;
        for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
            VertexConfig config(n, 1, 2, Topology::torus);
            for (int v = 0; v < n; ++v) config.set(v, 0, (bits >> v) & 1u);
            total += n_c(config);
        }
        const double mean = total / static_cast<double>(1ull << n);
        if (std::abs(mean - exact_mean_nc_single_feature(n)) > 1e-9) {
            detail = "enumeration oracle mismatch at N=" + std::to_string(n);
            return false;
        }
    }

    const int replicas = 1000;
    double sum = 0, sumsq = 0;
    for (int r = 0; r < replicas; ++r) {
        SystemParams p = base_params(1, 2, 20, derive_seed(909, r));
        MarkSource entropy(p.seed);
        Engine engine(p, sample_initial(p, entropy));
        run(engine, p.horizon);  // F = 1 absorbs at time zero
        const int nc = n_c(engine.vertices());
        sum += nc;
        sumsq += static_cast<double>(nc) * nc;
    }
    const double mean = sum / replicas;
    const double var = (sumsq - replicas * mean * mean) / (replicas - 1);
    const double se = std::sqrt(var / replicas);
    const double exact = exact_mean_nc_single_feature(20);
    char buf[128];
    std::snprintf(buf, sizeof buf, "mean n_c = %.4f +- %.4f, exact %.7f", mean, se,
                  exact);
    detail = buf;
    return std::abs(mean - exact) <= 3 * se;
}

struct Criterion {
    int id;
    const char* name;
    bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "rate identity (exact rationals)", criterion_rate_identity},
    {2, "coupling oracle + fault injection", criterion_coupling},
    {3, "empirical rate audit", criterion_rate_audit},
    {4, "pathwise invariants", criterion_pathwise},
    {5, "freezing/annihilation separation", criterion_freezing_separation},
    {6, "extinction trends", criterion_extinction},
    {7, "frozen-edge release probe", criterion_release_probe},
    {8, "phase sweep", criterion_phase_sweep},
    {9, "exact domain-count check", criterion_exact_nc},
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    bool all_ok = true;
    for (const auto& criterion : kCriteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), criterion.id) == selected.end())
            continue;
        std::string detail;
        const auto start = std::chrono::steady_clock::now();
        const bool ok = criterion.fn(detail);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::printf("[%s] criterion %d: %s — %s (%.1fs)\n", ok ? "PASS" : "FAIL",
                    criterion.id, criterion.name, detail.c_str(), secs);
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
