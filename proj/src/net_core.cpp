#include "interdep/net_core.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace interdep {

Side side_of(Role r) {
    switch (r) {
        case Role::Generation:
        case Role::Transmission:
        case Role::Distribution:
            return Side::Power;
        case Role::ControlCenter:
        case Role::Relay:
            return Side::Comm;
    }
    return Side::Power;
}

const char* to_string(Side s) { return s == Side::Power ? "power" : "comm"; }

const char* to_string(Role r) {
    switch (r) {
        case Role::Generation: return "generation";
        case Role::Transmission: return "transmission";
        case Role::Distribution: return "distribution";
        case Role::ControlCenter: return "control";
        case Role::Relay: return "relay";
    }
    return "?";
}

std::optional<Side> parse_side(std::string_view s) {
    if (s == "power") return Side::Power;
    if (s == "comm") return Side::Comm;
    return std::nullopt;
}

std::optional<Role> parse_role(std::string_view s) {
    for (Role r : {Role::Generation, Role::Transmission, Role::Distribution, Role::ControlCenter,
                   Role::Relay}) {
        if (s == to_string(r)) return r;
    }
    return std::nullopt;
}

std::string describe(NodeId id) { return std::string(to_string(id.side)) + ":" + std::to_string(id.index); }

Graph::Graph(std::uint32_t num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> half;
    half.reserve(edges_.size() * 2);
    for (const Edge& e : edges_) {
        if (e.a >= num_nodes_ || e.b >= num_nodes_)
            throw GraphError("edge endpoint out of range: " + std::to_string(e.a) + "-" +
                             std::to_string(e.b));
        if (e.a == e.b) continue;
        half.emplace_back(e.a, e.b);
        half.emplace_back(e.b, e.a);
    }
    std::sort(half.begin(), half.end());
    half.erase(std::unique(half.begin(), half.end()), half.end());
    offsets_.assign(num_nodes_ + 1, 0);
    for (auto [u, v] : half) ++offsets_[u + 1];
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adj_.reserve(half.size());
    for (auto [u, v] : half) adj_.push_back(v);
}

InterSystem::InterSystem(Graph power_graph, std::vector<Role> power_roles, Graph comm_graph,
                         std::vector<Role> comm_roles, std::vector<Arc> a_ctrl,
                         std::vector<Arc> a_energy, std::vector<Arc> a_info,
                         std::optional<std::vector<std::pair<std::uint32_t, std::uint32_t>>> e_dep,
                         std::optional<std::vector<Point>> power_coords,
                         std::optional<std::vector<Point>> comm_coords)
    : power_graph_(std::move(power_graph)),
      comm_graph_(std::move(comm_graph)),
      power_roles_(std::move(power_roles)),
      comm_roles_(std::move(comm_roles)),
      a_ctrl_(std::move(a_ctrl)),
      a_energy_(std::move(a_energy)),
      a_info_(std::move(a_info)),
      e_dep_(std::move(e_dep)),
      power_coords_(std::move(power_coords)),
      comm_coords_(std::move(comm_coords)) {
    if (power_roles_.size() != power_graph_.num_nodes() ||
        comm_roles_.size() != comm_graph_.num_nodes())
        throw GraphError("role table size does not match node count");
    if (power_coords_ && power_coords_->size() != power_graph_.num_nodes())
        throw GraphError("power coordinate table size does not match node count");
    if (comm_coords_ && comm_coords_->size() != comm_graph_.num_nodes())
        throw GraphError("comm coordinate table size does not match node count");

    // Arcs whose endpoints are out of range or on the wrong side are kept in
    // the raw lists (validate_system reports them) but left out of the indexes.
    const auto np = power_graph_.num_nodes();
    const auto nc = comm_graph_.num_nodes();
    ctrl_out_ = index_arcs(np, a_ctrl_, true, Side::Power);
    info_out_ = index_arcs(np, a_info_, true, Side::Power);
    energy_out_ = index_arcs(nc, a_energy_, true, Side::Comm);
    ctrl_in_ = index_arcs(nc, a_ctrl_, false, Side::Comm);
    info_in_ = index_arcs(nc, a_info_, false, Side::Comm);
    energy_in_ = index_arcs(np, a_energy_, false, Side::Power);
}

InterSystem::Csr InterSystem::index_arcs(std::uint32_t rows, const std::vector<Arc>& arcs,
                                         bool by_src, Side row_side) {
    const Side other = row_side == Side::Power ? Side::Comm : Side::Power;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(arcs.size());
    for (const Arc& a : arcs) {
        const NodeId& row = by_src ? a.src : a.dst;
        const NodeId& col = by_src ? a.dst : a.src;
        if (row.side != row_side || col.side != other || row.index >= rows) continue;
        pairs.emplace_back(row.index, col.index);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    Csr csr;
    csr.offsets.assign(rows + 1, 0);
    for (auto [r, c] : pairs) ++csr.offsets[r + 1];
    std::partial_sum(csr.offsets.begin(), csr.offsets.end(), csr.offsets.begin());
    csr.items.reserve(pairs.size());
    for (auto [r, c] : pairs) csr.items.push_back(c);
    return csr;
}

Role InterSystem::role(NodeId id) const {
    const auto& r = roles(id.side);
    if (id.index >= r.size()) throw GraphError("no such node: " + describe(id));
    return r[id.index];
}

std::vector<std::uint32_t> InterSystem::nodes_with_role(Role r) const {
    std::vector<std::uint32_t> out;
    const auto& table = roles(side_of(r));
    for (std::uint32_t i = 0; i < table.size(); ++i)
        if (table[i] == r) out.push_back(i);
    return out;
}

std::uint32_t AliveSet::count(Side s) const {
    const auto& f = flags(s);
    return static_cast<std::uint32_t>(std::count(f.begin(), f.end(), std::uint8_t{1}));
}

std::vector<NodeId> AliveSet::members() const {
    std::vector<NodeId> out;
    for (Side s : {Side::Power, Side::Comm}) {
        const auto& f = flags(s);
        for (std::uint32_t i = 0; i < f.size(); ++i)
            if (f[i]) out.push_back({s, i});
    }
    return out;
}

ComponentLabels label_components(const Graph& g, std::span<const std::uint8_t> alive) {
    const std::uint32_t n = g.num_nodes();
    ComponentLabels out;
    out.label.assign(n, kNoComponent);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t start = 0; start < n; ++start) {
        if (!alive[start] || out.label[start] != kNoComponent) continue;
        const auto id = static_cast<std::uint32_t>(out.sizes.size());
        std::uint32_t size = 0;
        out.label[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            ++size;
            for (std::uint32_t w : g.neighbors(v)) {
                if (alive[w] && out.label[w] == kNoComponent) {
                    out.label[w] = id;
                    stack.push_back(w);
                }
            }
        }
        out.sizes.push_back(size);
    }
    return out;
}

std::vector<std::vector<std::uint32_t>> components(const Graph& g,
                                                   std::span<const std::uint8_t> alive) {
    const ComponentLabels labels = label_components(g, alive);
    std::vector<std::vector<std::uint32_t>> out(labels.sizes.size());
    for (std::uint32_t v = 0; v < g.num_nodes(); ++v)
        if (labels.label[v] != kNoComponent) out[labels.label[v]].push_back(v);
    return out;
}

std::uint32_t giant_label(const ComponentLabels& labels) {
    // Labels are ordered by smallest member, so the first maximum wins ties.
    std::uint32_t best = kNoComponent;
    for (std::uint32_t c = 0; c < labels.sizes.size(); ++c)
        if (best == kNoComponent || labels.sizes[c] > labels.sizes[best]) best = c;
    return best;
}

std::vector<std::uint32_t> giant_component(const Graph& g, std::span<const std::uint8_t> alive) {
    const ComponentLabels labels = label_components(g, alive);
    const std::uint32_t gc = giant_label(labels);
    std::vector<std::uint32_t> out;
    if (gc == kNoComponent) return out;
    for (std::uint32_t v = 0; v < g.num_nodes(); ++v)
        if (labels.label[v] == gc) out.push_back(v);
    return out;
}

bool has_operational_path(const Graph& g, std::span<const std::uint8_t> alive, std::uint32_t src,
                          std::uint32_t dst) {
    if (src >= g.num_nodes() || dst >= g.num_nodes()) throw GraphError("no such node");
    if (!alive[src] || !alive[dst]) return false;
    if (src == dst) return true;
    std::vector<std::uint8_t> seen(g.num_nodes(), 0);
    std::vector<std::uint32_t> stack{src};
    seen[src] = 1;
    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        for (std::uint32_t w : g.neighbors(v)) {
            if (!alive[w] || seen[w]) continue;
            if (w == dst) return true;
            seen[w] = 1;
            stack.push_back(w);
        }
    }
    return false;
}

bool has_operational_path(const InterSystem& system, const AliveSet& alive, NodeId src, NodeId dst) {
    if (!system.contains(src) || !system.contains(dst)) throw GraphError("no such node");
    if (src.side != dst.side) throw GraphError("path endpoints lie in different networks");
    return has_operational_path(system.graph(src.side), alive.flags(src.side), src.index, dst.index);
}

std::uint32_t inter_degree(const InterSystem& system, NodeId node) {
    if (!system.contains(node)) throw GraphError("no such node: " + describe(node));
    if (node.side == Side::Power) return static_cast<std::uint32_t>(system.supplied_by(node.index).size());
    return static_cast<std::uint32_t>(system.controlled_by(node.index).size() +
                                      system.accessing(node.index).size());
}

namespace {

std::string describe_arc(const char* set, const Arc& a) {
    return std::string(set) + " arc " + describe(a.src) + "->" + describe(a.dst);
}

void check_graph(const Graph& g, Side side, std::vector<std::string>& out) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const Edge& e : g.edges()) {
        const std::string name = std::string(to_string(side)) + " edge " + std::to_string(e.a) +
                                 "-" + std::to_string(e.b);
        if (e.a == e.b) {
            out.push_back(name + ": self-loop");
            continue;
        }
        if (!seen.insert(std::minmax(e.a, e.b)).second) out.push_back(name + ": duplicate edge");
    }
}

void check_arcs(const InterSystem& s, const char* set, const std::vector<Arc>& arcs, Side src_side,
                std::optional<Role> required_dst_role, std::vector<std::string>& out) {
    std::set<Arc> seen;
    for (const Arc& a : arcs) {
        if (a.src.side != src_side || a.dst.side == src_side) {
            out.push_back(describe_arc(set, a) + ": wrong direction");
            continue;
        }
        if (!s.contains(a.src) || !s.contains(a.dst)) {
            out.push_back(describe_arc(set, a) + ": dangling endpoint");
            continue;
        }
        if (!seen.insert(a).second) {
            out.push_back(describe_arc(set, a) + ": duplicate arc");
            continue;
        }
        if (required_dst_role && s.role(a.dst) != *required_dst_role)
            out.push_back(describe_arc(set, a) + ": target must be " + to_string(*required_dst_role) +
                          ", found " + to_string(s.role(a.dst)));
    }
}

}  // namespace

std::vector<std::string> validate_system(const InterSystem& system) {
    std::vector<std::string> out;
    for (Side side : {Side::Power, Side::Comm}) {
        const auto& roles = system.roles(side);
        for (std::uint32_t i = 0; i < roles.size(); ++i)
            if (side_of(roles[i]) != side)
                out.push_back(describe({side, i}) + ": role " + to_string(roles[i]) +
                              " belongs to the other network");
        check_graph(system.graph(side), side, out);
    }
    check_arcs(system, "ctrl", system.a_ctrl(), Side::Power, Role::ControlCenter, out);
    check_arcs(system, "energy", system.a_energy(), Side::Comm, Role::Distribution, out);
    check_arcs(system, "info", system.a_info(), Side::Power, std::nullopt, out);

    if (const auto& dep = system.e_dep()) {
        std::set<std::uint32_t> used_power, used_comm;
        for (auto [p, c] : *dep) {
            const std::string name = "dep pair " + describe(power(p)) + "<->" + describe(comm(c));
            if (p >= system.size(Side::Power) || c >= system.size(Side::Comm)) {
                out.push_back(name + ": dangling endpoint");
                continue;
            }
            if (!used_power.insert(p).second || !used_comm.insert(c).second)
                out.push_back(name + ": node already paired (dependency must be one-to-one)");
        }
    }
    return out;
}

}  // namespace interdep
