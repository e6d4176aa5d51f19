#include "axl/model.hpp"

#include <ostream>
#include <stdexcept>

#include "axl/marks.hpp"

namespace axl {

std::string to_string(Topology t) {
    switch (t) {
        case Topology::torus: return "torus";
        case Topology::path: return "path";
        case Topology::killed_half_line: return "killed-half-line";
    }
    return "?";
}

Topology topology_from_string(const std::string& s) {
    if (s == "torus") return Topology::torus;
    if (s == "path") return Topology::path;
    if (s == "killed-half-line" || s == "killed_half_line")
        return Topology::killed_half_line;
    throw std::invalid_argument("unknown topology: " + s);
}

void SystemParams::validate() const {
    if (features < 1) throw std::invalid_argument("features must be >= 1");
    if (features > 64) throw std::invalid_argument("features must be <= 64");
    if (states < 2) throw std::invalid_argument("states must be >= 2");
    if (size < 2) throw std::invalid_argument("size must be >= 2");
    if (topology == Topology::killed_half_line && states != 2)
        throw std::invalid_argument("killed-half-line requires q = 2 (interface mode)");
}

VertexConfig::VertexConfig(int size, int features, int states, Topology topology)
    : size_(size), features_(features), states_(states), topology_(topology),
      data_(static_cast<std::size_t>(size) * features, 0) {
    if (size < 2 || features < 1 || states < 2)
        throw std::invalid_argument("VertexConfig: bad dimensions");
}

Culture VertexConfig::culture(int vertex) const {
    check_vertex(vertex);
    Culture c(features_);
    for (int i = 0; i < features_; ++i) c[i] = at(vertex, i);
    return c;
}

void VertexConfig::set_culture(int vertex, const Culture& c) {
    check_vertex(vertex);
    if (static_cast<int>(c.size()) != features_)
        throw std::invalid_argument("culture length != F");
    for (int i = 0; i < features_; ++i) {
        if (c[i] >= states_) throw std::invalid_argument("feature state out of range");
        set(vertex, i, c[i]);
    }
}

void VertexConfig::check_vertex(int v) const {
    if (v < 0 || v >= size_) throw std::invalid_argument("vertex out of range");
}

void VertexConfig::check_level(int i) const {
    if (i < 0 || i >= features_) throw std::invalid_argument("level out of range");
}

void VertexConfig::check_adjacent(int x, int y) const {
    check_vertex(x);
    check_vertex(y);
    int d = x - y;
    if (d < 0) d = -d;
    if (d == 1) return;
    if (topology_ == Topology::torus && d == size_ - 1) return;
    throw std::invalid_argument("vertices are not nearest neighbors");
}

InterfaceState::InterfaceState(int num_edges, int features, Topology topology)
    : features_(features), topology_(topology),
      masks_(num_edges, 0), zeta_(num_edges, 0) {
    if (num_edges < 1 || features < 1 || features > 64)
        throw std::invalid_argument("InterfaceState: bad dimensions");
}

std::uint64_t InterfaceState::total_particles() const {
    std::uint64_t total = 0;
    for (auto z : zeta_) total += z;
    return total;
}

Rational overlap(const VertexConfig& config, int x, int y) {
    config.check_adjacent(x, y);
    int agree = 0;
    for (int i = 0; i < config.features(); ++i)
        agree += config.at(x, i) == config.at(y, i);
    return {agree, config.features()};
}

std::vector<int> discordant_levels(const VertexConfig& config, int x, int y) {
    config.check_adjacent(x, y);
    std::vector<int> levels;
    for (int i = 0; i < config.features(); ++i)
        if (config.at(x, i) != config.at(y, i)) levels.push_back(i);
    return levels;
}

VertexConfig apply_copy(const VertexConfig& config, int x, int y, int level) {
    config.check_adjacent(x, y);
    config.check_level(level);
    VertexConfig next = config;
    next.set(x, level, config.at(y, level));
    return next;
}

Rational jump_rate(int occupancy, int features) {
    if (features < 1) throw std::invalid_argument("features must be >= 1");
    if (occupancy < 1 || occupancy > features)
        throw std::invalid_argument("occupancy must be in [1, F]");
    return Rational{1, occupancy} - Rational{1, features};
}

Rational copy_rate(const VertexConfig& config, int x, int y, int level) {
    config.check_adjacent(x, y);
    config.check_level(level);
    if (config.at(x, level) == config.at(y, level)) return {0};
    const int f = config.features();
    int agree = 0;
    for (int i = 0; i < f; ++i) agree += config.at(x, i) == config.at(y, i);
    // (1/2F) * overlap/(1 - overlap) = agree / (2F (F - agree)); the level is
    // discordant so agree < F.
    return Rational{agree, std::int64_t{2} * f * (f - agree)};
}

InterfaceState interface_view(const VertexConfig& config) {
    InterfaceState state(config.num_edges(), config.features(), config.topology());
    for (int u = 0; u < config.num_edges(); ++u) {
        const int x = config.left_vertex(u);
        const int y = config.right_vertex(u);
        for (int i = 0; i < config.features(); ++i)
            state.set(u, i, config.at(x, i) != config.at(y, i));
    }
    return state;
}

VertexConfig sample_initial(const SystemParams& params, const MarkSource& entropy) {
    params.validate();
    VertexConfig config(params.size, params.features, params.states, params.topology);
    for (int v = 0; v < params.size; ++v)
        for (int i = 0; i < params.features; ++i) {
            const double u = entropy.aux_uniform({v, i}, 0);
            int state = static_cast<int>(u * params.states);
            if (state >= params.states) state = params.states - 1;
            config.set(v, i, static_cast<std::uint8_t>(state));
        }
    return config;
}

VertexConfig monoculture(const SystemParams& params) {
    params.validate();
    return VertexConfig(params.size, params.features, params.states, params.topology);
}

void write_config(std::ostream& os, const VertexConfig& config) {
    for (int v = 0; v < config.size(); ++v) {
        for (int i = 0; i < config.features(); ++i) {
            if (i) os << ',';
            os << static_cast<int>(config.at(v, i));
        }
        os << '\n';
    }
}

void write_interfaces(std::ostream& os, const InterfaceState& state) {
    for (int u = 0; u < state.num_edges(); ++u) {
        for (int i = 0; i < state.features(); ++i)
            os << (state.occupied(u, i) ? '1' : '0');
        os << '\n';
    }
}

} // namespace axl
