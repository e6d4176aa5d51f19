#include <doctest.h>

#include <cmath>

#include "axl/coupling.hpp"
#include "test_helpers.hpp"

using namespace axl;

namespace {

SystemParams coupled_params(int f, int n, std::uint64_t seed) {
    SystemParams p;
    p.features = f;
    p.states = 2;
    p.size = n;
    p.topology = Topology::torus;
    p.seed = seed;
    return p;
}

} // namespace

TEST_CASE("vertex and interface chains agree event by event") {
    Horizon h;
    h.max_events = 10000;
    const CouplingReport report = couple_run(coupled_params(3, 64, 1), h);
    CHECK(report.pass);
    CHECK_FALSE(report.first_divergence.has_value());
    CHECK(report.events_compared > 0);
}

TEST_CASE("monoculture couples trivially with zero accepted events") {
    const auto params = coupled_params(3, 32, 4);
    const VertexConfig initial = monoculture(params);
    Horizon h;
    h.max_events = 1000;
    const CouplingReport report = couple_run(params, h, Fault::none, &initial);
    CHECK(report.pass);
    CHECK(report.events_compared == 0);
}

TEST_CASE("coupling rejects q != 2") {
    SystemParams p = coupled_params(3, 32, 1);
    p.states = 3;
    Horizon h;
    CHECK_THROWS_AS(couple_run(p, h), std::invalid_argument);
}

TEST_CASE("each seeded fault is caught by the oracle") {
    const Fault faults[] = {Fault::half_rate, Fault::flip_direction, Fault::coalesce,
                            Fault::adopt_wrong_side, Fault::off_by_one_edge};
    Horizon h;
    h.max_events = 10000;
    for (Fault fault : faults) {
        int detected = 0;
        for (std::uint64_t seed = 0; seed < 5; ++seed)
            detected += !couple_run(coupled_params(3, 16, seed), h, fault).pass;
        CHECK(detected >= 4);
    }
}

TEST_CASE("coupling report serializes to JSON") {
    Horizon h;
    h.max_events = 2000;
    const auto report = couple_run(coupled_params(2, 16, 9), h);
    const std::string json = report.to_json();
    CHECK(json.find("\"pass\"") != std::string::npos);
    CHECK(json.find("events_compared") != std::string::npos);
}

TEST_CASE("wilson interval brackets the point estimate") {
    double lo, hi;
    wilson_interval(50, 100, 2.5758, lo, hi);
    CHECK(lo < 0.5);
    CHECK(hi > 0.5);
    CHECK(lo > 0.35);
    CHECK(hi < 0.65);
    wilson_interval(0, 0, 2.5758, lo, hi);
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
}

TEST_CASE("empirical acceptance per occupancy class matches r(j)") {
    SystemParams p = coupled_params(3, 600, 12);
    p.horizon.max_events = 500000;
    const auto rows = rate_audit(p, 10000);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        if (row.occupancy < 3) {
            CHECK(row.sufficient);
            CHECK(row.ok);
            CHECK(row.ci_low <= row.expected);
            CHECK(row.expected <= row.ci_high);
        } else {
            CHECK(row.accepted == 0);
            CHECK(row.ok);
        }
    }
    CHECK(rows[0].expected == doctest::Approx(2.0 / 3.0));
    CHECK(rows[1].expected == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("two-feature audit contains r(1) = 1/2") {
    SystemParams p = coupled_params(2, 600, 8);
    p.horizon.max_events = 500000;
    const auto rows = rate_audit(p, 10000);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].expected == doctest::Approx(0.5));
    CHECK(rows[0].ok);
}
