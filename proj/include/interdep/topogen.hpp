#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "interdep/net_core.hpp"

namespace interdep {

class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RoleCounts {
    std::uint32_t generators = 100;
    std::uint32_t transmission = 270;
    std::uint32_t distribution = 630;
};

struct PowerGenParams {
    std::uint32_t n_nodes = 1000;
    std::uint32_t n_subnets = 20;
    double target_avg_degree = 4.0;
    double rewire_p = 0.1;
    RoleCounts role_counts;
    std::uint64_t seed = 0;
};

struct CommGenParams {
    std::uint32_t n_nodes = 1000;
    std::uint32_t m = 3;
    std::uint64_t seed = 0;
};

/// One side of a future InterSystem, before coupling.
struct Network {
    Graph graph;
    std::vector<Role> roles;
    std::vector<std::uint32_t> subnet;  // power networks only
    std::optional<std::vector<Point>> coords;
};

/// Nested small-world power grid: each subnet is a ring lattice with even
/// local degree closest to the target, rewired inside the subnet with
/// probability rewire_p (only when the subnet stays connected). Subnets are
/// chained in circular order by ceil(target/2) random edges per adjacent pair.
Network generate_power(const PowerGenParams& params);

/// Per-subnet role quotas by largest remainder, with global totals exact.
std::vector<Role> assign_roles(const Graph& graph, std::span<const std::uint32_t> subnet,
                               RoleCounts counts, std::uint64_t seed);

/// Preferential attachment grown from an m-clique. The highest-degree node
/// (smallest index on ties) is the control center; every other node is a relay.
Network generate_comm(const CommGenParams& params);

struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 100.0;
    double y_max = 100.0;
};

std::vector<Point> assign_coordinates(const Graph& graph, BoundingBox box, std::uint64_t seed);

enum class CouplingScheme : std::uint8_t { RandomHint, GeographicHint, KN };

const char* to_string(CouplingScheme s);
std::optional<CouplingScheme> parse_coupling(std::string_view s);

struct CouplingSpec {
    CouplingScheme scheme = CouplingScheme::RandomHint;
    std::uint32_t k = 1;
    std::uint32_t n = 0;  // KN cap per control node; 0 means ceil(k*|V_pow|/|V_cc|)
    std::uint64_t seed = 0;
};

InterSystem couple(const Network& power_side, const Network& comm_side, const CouplingSpec& spec);

}  // namespace interdep
