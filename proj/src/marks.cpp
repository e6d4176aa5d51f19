#include "axl/marks.hpp"

#include <cmath>
#include <stdexcept>

namespace axl {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr double kInv53 = 0x1.0p-53;

// lanes: 0 = arrival gap, 1 = direction, 2 = thinning uniform, 3 = aux
enum : std::uint64_t { kLaneGap = 0, kLaneDir = 1, kLaneThin = 2, kLaneAux = 3 };
} // namespace

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replica) {
    return mix64(master ^ mix64(replica + kGolden));
}

std::uint64_t MarkSource::word(StreamKey key, std::uint64_t n, std::uint64_t lane) const {
    std::uint64_t h = seed_;
    h = mix64(h ^ (kGolden * (static_cast<std::uint64_t>(key.edge) + 1)));
    h = mix64(h ^ (0xBF58476D1CE4E5B9ull * (static_cast<std::uint64_t>(key.level) + 1)));
    h = mix64(h ^ (0x94D049BB133111EBull * (n + 1)));
    h = mix64(h ^ (0xD6E8FEB86659FD93ull * (lane + 1)));
    return h;
}

double MarkSource::arrival_increment(StreamKey key, std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("arrival index must be >= 1");
    // Inverse CDF from a 53-bit uniform in [0, 1). A zero gap (probability
    // 2^-53) would break strict monotonicity; clamp to one ulp.
    const double u = static_cast<double>(word(key, n, kLaneGap) >> 11) * kInv53;
    double gap = -std::log1p(-u);
    if (gap <= 0.0) gap = kInv53;
    return gap;
}

int MarkSource::direction(StreamKey key, std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("arrival index must be >= 1");
    return (word(key, n, kLaneDir) & 1u) ? +1 : -1;
}

double MarkSource::thinning_uniform(StreamKey key, std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("arrival index must be >= 1");
    // Strictly inside (0, 1).
    return (static_cast<double>(word(key, n, kLaneThin) >> 11) + 0.5) * kInv53;
}

double MarkSource::aux_uniform(StreamKey key, std::uint64_t n) const {
    return static_cast<double>(word(key, n, kLaneAux) >> 11) * kInv53;
}

Mark MarkSource::mark_at(StreamKey key, std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("mark index must be >= 1");
    double time = 0.0;
    for (std::uint64_t m = 1; m <= n; ++m) time += arrival_increment(key, m);
    return Mark{n, time, direction(key, n), thinning_uniform(key, n)};
}

Mark MarkSource::next_arrival(StreamKey key, double after) const {
    double time = 0.0;
    std::uint64_t n = 0;
    do {
        ++n;
        time += arrival_increment(key, n);
    } while (time <= after);
    return Mark{n, time, direction(key, n), thinning_uniform(key, n)};
}

} // namespace axl
