#ifndef AXL_MARKS_HPP
#define AXL_MARKS_HPP

#include <cstdint>

namespace axl {

/// Addresses one Poisson clock: (edge, level), both zero-based.
struct StreamKey {
    int edge = 0;
    int level = 0;
    friend bool operator==(StreamKey a, StreamKey b) {
        return a.edge == b.edge && a.level == b.level;
    }
};

/// One arrival of a clock together with its attached randomness.
struct Mark {
    std::uint64_t index = 0;   // n >= 1
    double time = 0.0;         // strictly increasing in n for a fixed key
    int direction = +1;        // +1 or -1, fair coin
    double uniform = 0.5;      // thinning mark, open interval (0,1)
};

/// Counter-based randomness: every value is a pure function of
/// (seed, edge, level, n, lane). Two engines fed the same source replay
/// identical marks without storing any history.
class MarkSource {
public:
    explicit MarkSource(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// The n-th mark of a clock (n >= 1). O(n): sums the first n
    /// exponential increments. Sequential consumers should keep a cursor.
    Mark mark_at(StreamKey key, std::uint64_t n) const;

    /// Earliest mark with time > after.
    Mark next_arrival(StreamKey key, double after) const;

    /// Exp(1) gap between arrivals n-1 and n (inverse CDF, 53-bit uniform).
    double arrival_increment(StreamKey key, std::uint64_t n) const;

    int direction(StreamKey key, std::uint64_t n) const;
    double thinning_uniform(StreamKey key, std::uint64_t n) const;

    /// Uniform in [0,1) from a spare lane; used for initial conditions
    /// (n = 0 is never consumed by the mark lanes).
    double aux_uniform(StreamKey key, std::uint64_t n) const;

private:
    std::uint64_t word(StreamKey key, std::uint64_t n, std::uint64_t lane) const;
    std::uint64_t seed_;
};

/// Replica seed derivation, bit-exact across platforms:
/// mix64(master ^ mix64(replica + 0x9E3779B97F4A7C15)).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replica);

/// SplitMix64 finalizer; exposed for tests.
std::uint64_t mix64(std::uint64_t x);

} // namespace axl

#endif
