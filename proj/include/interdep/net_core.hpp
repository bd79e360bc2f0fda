#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace interdep {

enum class Side : std::uint8_t { Power = 0, Comm = 1 };

enum class Role : std::uint8_t {
    Generation,
    Transmission,
    Distribution,
    ControlCenter,
    Relay,
};

struct NodeId {
    Side side = Side::Power;
    std::uint32_t index = 0;

    friend bool operator==(const NodeId&, const NodeId&) = default;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline NodeId power(std::uint32_t i) { return {Side::Power, i}; }
inline NodeId comm(std::uint32_t i) { return {Side::Comm, i}; }

Side side_of(Role r);
const char* to_string(Side s);
const char* to_string(Role r);
std::optional<Side> parse_side(std::string_view s);
std::optional<Role> parse_role(std::string_view s);
std::string describe(NodeId id);

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Edge {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected graph over dense indices 0..n-1 with CSR adjacency.
///
/// The raw edge list is kept verbatim so that validation can report
/// self-loops and duplicates; adjacency ignores self-loops and collapses
/// duplicates.
class Graph {
public:
    Graph() = default;
    Graph(std::uint32_t num_nodes, std::vector<Edge> edges);

    std::uint32_t num_nodes() const { return num_nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }
    std::uint32_t degree(std::uint32_t v) const { return offsets_[v + 1] - offsets_[v]; }

private:
    std::uint32_t num_nodes_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> offsets_{0};
    std::vector<std::uint32_t> adj_;
};

struct Arc {
    NodeId src;
    NodeId dst;
    friend bool operator==(const Arc&, const Arc&) = default;
    friend auto operator<=>(const Arc&, const Arc&) = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

/// Pair of networks plus every dependency arc set.
///
/// a_ctrl and a_info run Power -> Comm, a_energy runs Comm -> Power. The
/// optional e_dep pairs (power, comm) form an explicit one-to-one view used
/// by the Uniform model. Per-node arc indexes are built once at
/// construction; the object is immutable afterwards.
class InterSystem {
public:
    InterSystem() = default;
    InterSystem(Graph power_graph, std::vector<Role> power_roles, Graph comm_graph,
                std::vector<Role> comm_roles, std::vector<Arc> a_ctrl, std::vector<Arc> a_energy,
                std::vector<Arc> a_info,
                std::optional<std::vector<std::pair<std::uint32_t, std::uint32_t>>> e_dep = {},
                std::optional<std::vector<Point>> power_coords = {},
                std::optional<std::vector<Point>> comm_coords = {});

    const Graph& graph(Side s) const { return s == Side::Power ? power_graph_ : comm_graph_; }
    const Graph& power_graph() const { return power_graph_; }
    const Graph& comm_graph() const { return comm_graph_; }
    std::uint32_t size(Side s) const { return graph(s).num_nodes(); }
    std::uint32_t total_nodes() const { return size(Side::Power) + size(Side::Comm); }

    Role role(NodeId id) const;
    const std::vector<Role>& roles(Side s) const {
        return s == Side::Power ? power_roles_ : comm_roles_;
    }
    std::vector<std::uint32_t> nodes_with_role(Role r) const;

    const std::vector<Arc>& a_ctrl() const { return a_ctrl_; }
    const std::vector<Arc>& a_energy() const { return a_energy_; }
    const std::vector<Arc>& a_info() const { return a_info_; }
    const auto& e_dep() const { return e_dep_; }
    const auto& coords(Side s) const { return s == Side::Power ? power_coords_ : comm_coords_; }

    bool contains(NodeId id) const { return id.index < size(id.side); }

    // Out-neighbour lists, by source index. Entries are indices on the other side.
    std::span<const std::uint32_t> ctrl_of(std::uint32_t power_node) const {
        return ctrl_out_.row(power_node);
    }
    std::span<const std::uint32_t> info_of(std::uint32_t power_node) const {
        return info_out_.row(power_node);
    }
    std::span<const std::uint32_t> suppliers_of(std::uint32_t comm_node) const {
        return energy_out_.row(comm_node);
    }
    // In-neighbour lists, by target index.
    std::span<const std::uint32_t> controlled_by(std::uint32_t comm_node) const {
        return ctrl_in_.row(comm_node);
    }
    std::span<const std::uint32_t> accessing(std::uint32_t comm_node) const {
        return info_in_.row(comm_node);
    }
    std::span<const std::uint32_t> supplied_by(std::uint32_t power_node) const {
        return energy_in_.row(power_node);
    }

private:
    struct Csr {
        std::vector<std::uint32_t> offsets{0};
        std::vector<std::uint32_t> items;
        std::span<const std::uint32_t> row(std::uint32_t i) const {
            if (i + 1 >= offsets.size()) return {};
            return {items.data() + offsets[i], items.data() + offsets[i + 1]};
        }
    };
    static Csr index_arcs(std::uint32_t rows, const std::vector<Arc>& arcs, bool by_src,
                          Side row_side);

    Graph power_graph_;
    Graph comm_graph_;
    std::vector<Role> power_roles_;
    std::vector<Role> comm_roles_;
    std::vector<Arc> a_ctrl_;
    std::vector<Arc> a_energy_;
    std::vector<Arc> a_info_;
    std::optional<std::vector<std::pair<std::uint32_t, std::uint32_t>>> e_dep_;
    std::optional<std::vector<Point>> power_coords_;
    std::optional<std::vector<Point>> comm_coords_;

    Csr ctrl_out_, info_out_, energy_out_;
    Csr ctrl_in_, info_in_, energy_in_;
};

/// Operational flags for both sides; failed = all nodes minus alive.
class AliveSet {
public:
    AliveSet() = default;
    AliveSet(std::uint32_t n_power, std::uint32_t n_comm, bool value = true)
        : power_(n_power, value ? 1 : 0), comm_(n_comm, value ? 1 : 0) {}
    static AliveSet all(const InterSystem& s) {
        return {s.size(Side::Power), s.size(Side::Comm), true};
    }

    bool operator[](NodeId id) const { return flags(id.side)[id.index] != 0; }
    bool alive(Side s, std::uint32_t i) const { return flags(s)[i] != 0; }
    void set(NodeId id, bool value) { flags(id.side)[id.index] = value ? 1 : 0; }
    void kill(NodeId id) { set(id, false); }

    const std::vector<std::uint8_t>& flags(Side s) const {
        return s == Side::Power ? power_ : comm_;
    }
    std::vector<std::uint8_t>& flags(Side s) { return s == Side::Power ? power_ : comm_; }

    std::uint32_t count(Side s) const;
    std::uint32_t count() const { return count(Side::Power) + count(Side::Comm); }
    std::vector<NodeId> members() const;

    friend bool operator==(const AliveSet&, const AliveSet&) = default;

private:
    std::vector<std::uint8_t> power_;
    std::vector<std::uint8_t> comm_;
};

inline constexpr std::uint32_t kNoComponent = 0xFFFFFFFFu;

/// Component label per node (kNoComponent for dead nodes). Labels are
/// assigned in order of each component's smallest member index.
struct ComponentLabels {
    std::vector<std::uint32_t> label;
    std::vector<std::uint32_t> sizes;
};

ComponentLabels label_components(const Graph& g, std::span<const std::uint8_t> alive);

/// Components of the alive subgraph, each sorted ascending, ordered by
/// smallest member.
std::vector<std::vector<std::uint32_t>> components(const Graph& g,
                                                   std::span<const std::uint8_t> alive);

/// Largest alive component; ties go to the component with the smallest index.
std::vector<std::uint32_t> giant_component(const Graph& g, std::span<const std::uint8_t> alive);

/// Label of the giant component inside `labels`, or kNoComponent if empty.
std::uint32_t giant_label(const ComponentLabels& labels);

/// Throws GraphError("no such node") for out-of-range endpoints.
bool has_operational_path(const Graph& g, std::span<const std::uint8_t> alive, std::uint32_t src,
                          std::uint32_t dst);
/// Same query on a side-tagged pair; mixed sides are rejected.
bool has_operational_path(const InterSystem& system, const AliveSet& alive, NodeId src, NodeId dst);

/// Number of dependency arcs (any set) terminating at `node`.
std::uint32_t inter_degree(const InterSystem& system, NodeId node);

std::vector<std::string> validate_system(const InterSystem& system);

}  // namespace interdep
