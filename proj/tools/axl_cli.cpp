// axl: experiment runner for the 1D culture-chain / annihilating-walk simulator.
//
// Subcommands: simulate | sweep | raster | couple | audit
// Exit codes: 0 pass, 1 check failure, 2 usage error.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "axl/coupling.hpp"
#include "axl/engine.hpp"
#include "axl/marks.hpp"
#include "axl/model.hpp"
#include "axl/stats.hpp"

namespace fs = std::filesystem;
using namespace axl;

namespace {

struct Options {
    std::vector<int> features{3};
    std::vector<int> states{2};
    std::vector<int> sizes{600};
    std::string topology = "torus";
    std::string seed_text = "1";
    int replicas = 30;
    double t_max = 1e4;
    std::uint64_t events_max = std::numeric_limits<std::uint64_t>::max();
    std::string sample_grid;  // "t1,t2,..." or "geom:t0:factor:count"
    std::string out_dir;
    int workers = 1;
    int level = -1;           // raster: -1 = superposition of all levels
    int bins = 600;
    std::string init = "random";  // random | monoculture
    std::string fault = "none";
};

std::uint64_t parse_seed(const std::string& text) {
    // Decimal or 0x-hex.
    return std::stoull(text, nullptr, 0);
}

Fault parse_fault(const std::string& name) {
    if (name == "none") return Fault::none;
    if (name == "half-rate") return Fault::half_rate;
    if (name == "flip-direction") return Fault::flip_direction;
    if (name == "coalesce") return Fault::coalesce;
    if (name == "adopt-wrong-side") return Fault::adopt_wrong_side;
    if (name == "off-by-one-edge") return Fault::off_by_one_edge;
    throw CLI::ValidationError("--fault", "unknown fault: " + name);
}

std::vector<double> parse_sample_grid(const std::string& spec, double t_max) {
    std::vector<double> times;
    if (spec.empty() || spec.rfind("geom", 0) == 0) {
        // geometric grid t0 * factor^k, default t0=1, factor=2, up to t_max
        double t0 = 1.0, factor = 2.0;
        int count = -1;
        if (!spec.empty()) {
            std::stringstream ss(spec);
            std::string tok;
            std::getline(ss, tok, ':');
            if (std::getline(ss, tok, ':')) t0 = std::stod(tok);
            if (std::getline(ss, tok, ':')) factor = std::stod(tok);
            if (std::getline(ss, tok, ':')) count = std::stoi(tok);
        }
        double t = t0;
        while ((count < 0 && t <= t_max) ||
               (count >= 0 && static_cast<int>(times.size()) < count)) {
            times.push_back(t);
            t *= factor;
        }
    } else {
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) times.push_back(std::stod(tok));
    }
    if (!std::is_sorted(times.begin(), times.end()))
        throw CLI::ValidationError("--sample-grid", "times must be increasing");
    return times;
}

SystemParams make_params(const Options& opt, int f, int q, int n) {
    SystemParams p;
    p.features = f;
    p.states = q;
    p.size = n;
    p.topology = topology_from_string(opt.topology);
    p.seed = parse_seed(opt.seed_text);
    p.horizon.t_max = opt.t_max;
    p.horizon.max_events = opt.events_max;
    return p;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

fs::path resolve_out(const Options& opt) {
    std::string dir = opt.out_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("AXL_OUT")) dir = env;
        else dir = ".";
    }
    fs::create_directories(dir);
    return dir;
}

void add_common(CLI::App* cmd, Options& opt, bool lists_allowed) {
    if (lists_allowed) {
        cmd->add_option("--features", opt.features, "feature count(s) F");
        cmd->add_option("--states", opt.states, "state count(s) q");
        cmd->add_option("--size", opt.sizes, "vertex count(s) N");
    } else {
        opt.features = {3};
        opt.states = {2};
        opt.sizes = {600};
        cmd->add_option("--features", opt.features[0], "feature count F");
        cmd->add_option("--states", opt.states[0], "state count q");
        cmd->add_option("--size", opt.sizes[0], "vertex count N");
    }
    cmd->add_option("--topology", opt.topology, "torus | path | killed-half-line");
    cmd->add_option("--seed", opt.seed_text, "master seed (decimal or 0x-hex)");
    cmd->add_option("--replicas", opt.replicas, "replica count");
    cmd->add_option("--t-max", opt.t_max, "time horizon");
    cmd->add_option("--events-max", opt.events_max, "event budget");
    cmd->add_option("--sample-grid", opt.sample_grid,
                    "comma list or geom:t0:factor[:count]");
    cmd->add_option("--out", opt.out_dir, "output directory (default $AXL_OUT or .)");
    cmd->add_option("--workers", opt.workers, "worker threads");
    cmd->set_config("--config");
}

struct ReplicaResult {
    AbsorptionRecord record;
    std::vector<std::array<double, 5>> density;  // zeta, active, frozen, pF, pA
};

ReplicaResult run_replica(const SystemParams& base, std::uint64_t replica,
                          const std::string& init,
                          std::span<const double> sample_times) {
    SystemParams local = base;
    local.seed = derive_seed(base.seed, replica);
    MarkSource entropy(local.seed);
    VertexConfig initial = init == "monoculture" ? monoculture(local)
                                                 : sample_initial(local, entropy);
    Engine engine(local, std::move(initial));
    ReplicaResult out;
    const RunResult rr = run(engine, local.horizon, sample_times,
                             [&](double, const Engine& e) {
        const double edges = e.params().num_edges();
        double z = 0, act = 0, frz = 0, pf = 0, pa = 0;
        for (int u = 0; u < e.params().num_edges(); ++u) {
            const int zu = e.zeta(u);
            z += zu;
            if (zu == e.params().features) { frz += zu; pf += 1; }
            else if (zu > 0) { act += zu; pa += 1; }
        }
        out.density.push_back({z / edges, act / edges, frz / edges,
                               pf / edges, pa / edges});
    });
    AbsorptionRecord& rec = out.record;
    rec.replica = replica;
    rec.seed = local.seed;
    rec.features = local.features;
    rec.states = local.states;
    rec.size = local.size;
    rec.topology = local.topology;
    rec.s_max = s_max(engine.vertices());
    rec.n_c = n_c(engine.vertices());
    rec.censored = !rr.absorbed;
    rec.t_abs = rr.absorbed ? rr.t_abs : rr.final_time;
    rec.annihilations = rr.annihilations;
    rec.freezings = rr.freezings;
    return out;
}

void parallel_jobs(int jobs, int workers, const std::function<void(int)>& fn);

int cmd_simulate(const Options& opt) {
    const SystemParams base = make_params(opt, opt.features[0], opt.states[0],
                                          opt.sizes[0]);
    base.validate();
    if (base.topology == Topology::killed_half_line)
        throw CLI::ValidationError("--topology", "simulate runs the vertex chain");
    const auto times = parse_sample_grid(opt.sample_grid, opt.t_max);
    const fs::path dir = resolve_out(opt);

    std::vector<ReplicaResult> results(opt.replicas);
    parallel_jobs(opt.replicas, opt.workers, [&](int r) {
        results[r] = run_replica(base, static_cast<std::uint64_t>(r), opt.init, times);
    });

    {
        std::ofstream csv(dir / "absorption.csv");
        csv << "replica,seed,F,q,N,topology,s_max,n_c,t_abs,censored,"
               "annihilations,freezings\n";
        for (const auto& res : results) {
            const auto& a = res.record;
            csv << a.replica << ',' << a.seed << ',' << a.features << ','
                << a.states << ',' << a.size << ',' << to_string(a.topology) << ','
                << a.s_max << ',' << a.n_c << ',' << fmt(a.t_abs) << ','
                << (a.censored ? 1 : 0) << ',' << a.annihilations << ','
                << a.freezings << '\n';
        }
    }
    {
        std::ofstream csv(dir / "density.csv");
        csv << "t,mean_zeta,se,active,se_active,frozen,se_frozen,p_F,p_active\n";
        const int R = opt.replicas;
        for (std::size_t t = 0; t < times.size(); ++t) {
            std::array<double, 5> mean{}, var{};
            for (const auto& res : results)
                for (int c = 0; c < 5; ++c) mean[c] += res.density[t][c];
            for (int c = 0; c < 5; ++c) mean[c] /= R;
            for (const auto& res : results)
                for (int c = 0; c < 5; ++c) {
                    const double d = res.density[t][c] - mean[c];
                    var[c] += d * d;
                }
            std::array<double, 5> se{};
            for (int c = 0; c < 5; ++c)
                se[c] = R > 1 ? std::sqrt(var[c] / (R - 1) / R) : 0.0;
            csv << fmt(times[t]) << ',' << fmt(mean[0]) << ',' << fmt(se[0]) << ','
                << fmt(mean[1]) << ',' << fmt(se[1]) << ',' << fmt(mean[2]) << ','
                << fmt(se[2]) << ',' << fmt(mean[3]) << ',' << fmt(mean[4]) << '\n';
        }
    }
    std::cout << "wrote " << (dir / "absorption.csv").string() << " and "
              << (dir / "density.csv").string() << "\n";
    return 0;
}

int cmd_sweep(const Options& opt) {
    const fs::path dir = resolve_out(opt);
    std::ofstream csv(dir / "phase.csv");
    csv << "F,q,N,replicas,mean_smax,se_smax,mean_smax_over_n,se_smax_over_n,"
           "mean_nc_over_n,se_nc_over_n,censored\n";
    for (int f : opt.features)
        for (int q : opt.states)
            for (int n : opt.sizes) {
                try {
                    const SystemParams base = make_params(opt, f, q, n);
                    base.validate();
                    std::vector<ReplicaResult> results(opt.replicas);
                    parallel_jobs(opt.replicas, opt.workers, [&](int r) {
                        results[r] = run_replica(base, static_cast<std::uint64_t>(r),
                                                 opt.init, {});
                    });
                    double ms = 0, msn = 0, mnc = 0;
                    int censored = 0;
                    for (const auto& res : results) {
                        ms += res.record.s_max;
                        msn += static_cast<double>(res.record.s_max) / n;
                        mnc += static_cast<double>(res.record.n_c) / n;
                        censored += res.record.censored;
                    }
                    const int R = opt.replicas;
                    ms /= R; msn /= R; mnc /= R;
                    double vs = 0, vsn = 0, vnc = 0;
                    for (const auto& res : results) {
                        vs += (res.record.s_max - ms) * (res.record.s_max - ms);
                        const double sn = static_cast<double>(res.record.s_max) / n;
                        vsn += (sn - msn) * (sn - msn);
                        const double nn = static_cast<double>(res.record.n_c) / n;
                        vnc += (nn - mnc) * (nn - mnc);
                    }
                    const double k = R > 1 ? 1.0 / ((R - 1.0) * R) : 0.0;
                    csv << f << ',' << q << ',' << n << ',' << R << ','
                        << fmt(ms) << ',' << fmt(std::sqrt(vs * k)) << ','
                        << fmt(msn) << ',' << fmt(std::sqrt(vsn * k)) << ','
                        << fmt(mnc) << ',' << fmt(std::sqrt(vnc * k)) << ','
                        << censored << '\n';
                } catch (const std::exception& e) {
                    std::cerr << "cell F=" << f << " q=" << q << " N=" << n
                              << " failed: " << e.what() << "\n";
                }
            }
    std::cout << "wrote " << (dir / "phase.csv").string() << "\n";
    return 0;
}

int cmd_raster(const Options& opt) {
    const SystemParams base = make_params(opt, opt.features[0], opt.states[0],
                                          opt.sizes[0]);
    base.validate();
    if (base.states != 2)
        throw CLI::ValidationError("--states", "raster requires q = 2");
    std::vector<double> times(opt.bins);
    for (int b = 0; b < opt.bins; ++b)
        times[b] = opt.t_max * (b + 1) / opt.bins;

    MarkSource entropy(base.seed);
    VertexConfig initial = opt.init == "monoculture"
                               ? monoculture(base)
                               : sample_initial(base, entropy);
    Engine engine(base, std::move(initial));
    const int edges = base.num_edges();
    std::vector<std::vector<int>> image(edges, std::vector<int>(opt.bins, 0));
    int column = 0;
    run(engine, base.horizon, times, [&](double, const Engine& e) {
        for (int u = 0; u < edges; ++u)
            image[u][column] = opt.level >= 0 ? (e.interfaces().occupied(u, opt.level) ? 1 : 0)
                                              : e.zeta(u);
        ++column;
    });

    const fs::path dir = resolve_out(opt);
    const std::string name = opt.level >= 0
        ? "raster_l" + std::to_string(opt.level) + ".pgm" : "raster.pgm";
    std::ofstream pgm(dir / name);
    pgm << "P2\n";
    pgm << "# F=" << base.features << " q=" << base.states << " N=" << base.size
        << " topology=" << to_string(base.topology) << " seed=" << base.seed
        << " t_max=" << fmt(opt.t_max) << " bins=" << opt.bins
        << (opt.level >= 0 ? " level=" + std::to_string(opt.level) : " channel=zeta")
        << "\n";
    pgm << opt.bins << ' ' << edges << '\n';  // width = time bins, height = edges
    pgm << base.features << '\n';
    // rows = edges, columns = time bins
    for (int u = 0; u < edges; ++u) {
        for (int b = 0; b < opt.bins; ++b) {
            if (b) pgm << ' ';
            pgm << image[u][b];
        }
        pgm << '\n';
    }
    std::cout << "wrote " << (dir / name).string() << "\n";
    return 0;
}

int cmd_couple(const Options& opt) {
    const SystemParams base = make_params(opt, opt.features[0], opt.states[0],
                                          opt.sizes[0]);
    Horizon horizon = base.horizon;
    if (horizon.max_events == std::numeric_limits<std::uint64_t>::max())
        horizon.max_events = 100000;
    const CouplingReport report = couple_run(base, horizon, parse_fault(opt.fault));
    std::cout << report.to_json() << "\n";
    return report.pass ? 0 : 1;
}

int cmd_audit(const Options& opt) {
    const SystemParams base = make_params(opt, opt.features[0], opt.states[0],
                                          opt.sizes[0]);
    const auto rows = rate_audit(base, 10000);
    bool fail = false;
    std::printf("%3s %10s %10s %12s %12s %12s %12s  %s\n", "j", "trials",
                "accepted", "empirical", "expected", "ci_low", "ci_high", "status");
    for (const auto& row : rows) {
        const char* status = !row.sufficient && row.occupancy < base.features
                                 ? "insufficient"
                                 : (row.ok ? "ok" : "FAIL");
        if (row.sufficient && !row.ok) fail = true;
        if (row.occupancy == base.features && !row.ok) fail = true;
        std::printf("%3d %10llu %10llu %12.6f %12.6f %12.6f %12.6f  %s\n",
                    row.occupancy,
                    static_cast<unsigned long long>(row.trials),
                    static_cast<unsigned long long>(row.accepted), row.empirical,
                    row.expected, row.ci_low, row.ci_high, status);
    }
    return fail ? 1 : 0;
}

void parallel_jobs(int jobs, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1 || jobs <= 1) {
        for (int j = 0; j < jobs; ++j) fn(j);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int n = std::min(workers, jobs);
    for (int w = 0; w < n; ++w)
        pool.emplace_back([&] {
            for (int j = next.fetch_add(1); j < jobs; j = next.fetch_add(1)) fn(j);
        });
    for (auto& t : pool) t.join();
}
} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D culture chain / annihilating random walk toolkit"};
    app.require_subcommand(1);

    Options sim_opt, sweep_opt, raster_opt, couple_opt, audit_opt;

    auto* sim = app.add_subcommand("simulate", "replica runs: absorption + density CSVs");
    add_common(sim, sim_opt, false);
    sim->add_option("--init", sim_opt.init, "random | monoculture");

    auto* sweep = app.add_subcommand("sweep", "phase table over an (F, q, N) grid");
    add_common(sweep, sweep_opt, true);

    auto* raster = app.add_subcommand("raster", "space-time PGM raster (q = 2)");
    add_common(raster, raster_opt, false);
    raster->add_option("--level", raster_opt.level, "single level (default: total zeta)");
    raster->add_option("--bins", raster_opt.bins, "time bins (columns)");
    raster->add_option("--init", raster_opt.init, "random | monoculture");

    auto* couple = app.add_subcommand("couple", "vertex/interface coupling oracle (q = 2)");
    add_common(couple, couple_opt, false);
    couple->add_option("--fault", couple_opt.fault,
                       "none | half-rate | flip-direction | coalesce | "
                       "adopt-wrong-side | off-by-one-edge");

    auto* audit = app.add_subcommand("audit", "empirical jump-rate audit (q = 2)");
    add_common(audit, audit_opt, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_opt);
        if (sweep->parsed()) return cmd_sweep(sweep_opt);
        if (raster->parsed()) return cmd_raster(raster_opt);
        if (couple->parsed()) return cmd_couple(couple_opt);
        if (audit->parsed()) return cmd_audit(audit_opt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
