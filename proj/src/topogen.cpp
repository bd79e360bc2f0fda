#include "interdep/topogen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "interdep/random.hpp"

namespace interdep {

namespace {

using AdjSets = std::vector<std::set<std::uint32_t>>;

template <class T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
}

bool connected_within(const AdjSets& adj, std::uint32_t first, std::uint32_t count) {
    if (count == 0) return true;
    std::vector<std::uint8_t> seen(count, 0);
    std::vector<std::uint32_t> stack{first};
    seen[0] = 1;
    std::uint32_t reached = 1;
    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        for (std::uint32_t w : adj[v]) {
            if (!seen[w - first]) {
                seen[w - first] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == count;
}

Graph to_graph(std::uint32_t n, const AdjSets& adj) {
    std::vector<Edge> edges;
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v : adj[u])
            if (u < v) edges.push_back({u, v});
    return Graph(n, std::move(edges));
}

}  // namespace

Network generate_power(const PowerGenParams& p) {
    if (p.n_subnets < 1 || p.n_nodes < p.n_subnets)
        throw TopologyError("need at least one node per subnet");
    if (!(p.target_avg_degree >= 2.0)) throw TopologyError("target average degree must be >= 2");
    if (!(p.rewire_p >= 0.0 && p.rewire_p <= 1.0))
        throw TopologyError("rewire probability must lie in [0,1]");
    const auto& rc = p.role_counts;
    if (std::uint64_t{rc.generators} + rc.transmission + rc.distribution != p.n_nodes)
        throw TopologyError("role counts must sum to the node count");

    const std::uint32_t lattice_degree =
        std::max<std::uint32_t>(2, 2 * static_cast<std::uint32_t>(std::lround(p.target_avg_degree / 2)));
    const std::uint32_t base = p.n_nodes / p.n_subnets;
    const std::uint32_t extra = p.n_nodes % p.n_subnets;
    if (lattice_degree >= base)
        throw TopologyError("lattice degree " + std::to_string(lattice_degree) +
                            " is infeasible for subnets of " + std::to_string(base) + " nodes");

    Rng rng(p.seed);
    std::vector<std::uint32_t> first(p.n_subnets + 1, 0);
    for (std::uint32_t s = 0; s < p.n_subnets; ++s) first[s + 1] = first[s] + base + (s < extra ? 1 : 0);

    Network net;
    net.subnet.resize(p.n_nodes);
    AdjSets adj(p.n_nodes);
    const std::uint32_t half = lattice_degree / 2;

    for (std::uint32_t s = 0; s < p.n_subnets; ++s) {
        const std::uint32_t lo = first[s];
        const std::uint32_t size = first[s + 1] - lo;
        std::vector<Edge> lattice;
        for (std::uint32_t i = 0; i < size; ++i) {
            net.subnet[lo + i] = s;
            for (std::uint32_t d = 1; d <= half; ++d) {
                const std::uint32_t u = lo + i;
                const std::uint32_t v = lo + (i + d) % size;
                adj[u].insert(v);
                adj[v].insert(u);
                lattice.push_back({u, v});
            }
        }
        // Rewire each original lattice edge (u,v) to (u,w) with w drawn from
        // the subnet, rejecting moves that would disconnect it.
        for (const Edge& e : lattice) {
            if (!rng.chance(p.rewire_p)) continue;
            const std::uint32_t u = e.a;
            const std::uint32_t v = e.b;
            if (!adj[u].contains(v)) continue;
            std::vector<std::uint32_t> options;
            for (std::uint32_t w = lo; w < lo + size; ++w)
                if (w != u && !adj[u].contains(w)) options.push_back(w);
            if (options.empty()) continue;
            const std::uint32_t w = options[rng.below(options.size())];
            adj[u].erase(v);
            adj[v].erase(u);
            adj[u].insert(w);
            adj[w].insert(u);
            if (!connected_within(adj, lo, size)) {
                adj[u].erase(w);
                adj[w].erase(u);
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
    }

    // Chain subnets in circular order.
    const auto links = static_cast<std::uint32_t>(std::ceil(p.target_avg_degree / 2));
    const std::uint32_t pairs = p.n_subnets == 1 ? 0 : (p.n_subnets == 2 ? 1 : p.n_subnets);
    for (std::uint32_t s = 0; s < pairs; ++s) {
        const std::uint32_t t = (s + 1) % p.n_subnets;
        const std::uint32_t size_s = first[s + 1] - first[s];
        const std::uint32_t size_t_ = first[t + 1] - first[t];
        const std::uint64_t possible = std::uint64_t{size_s} * size_t_;
        std::uint32_t added = 0;
        for (std::uint64_t tries = 0; added < links && tries < 64 * possible; ++tries) {
            const std::uint32_t u = first[s] + static_cast<std::uint32_t>(rng.below(size_s));
            const std::uint32_t v = first[t] + static_cast<std::uint32_t>(rng.below(size_t_));
            if (adj[u].insert(v).second) {
                adj[v].insert(u);
                ++added;
            }
        }
    }

    net.graph = to_graph(p.n_nodes, adj);
    net.roles = assign_roles(net.graph, net.subnet, p.role_counts, derive_seed(p.seed, 1));
    return net;
}

std::vector<Role> assign_roles(const Graph& graph, std::span<const std::uint32_t> subnet,
                               RoleCounts counts, std::uint64_t seed) {
    const std::uint32_t n = graph.num_nodes();
    if (subnet.size() != n) throw TopologyError("subnet labels must cover every node");
    const std::uint64_t want[3] = {counts.generators, counts.transmission, counts.distribution};
    if (want[0] + want[1] + want[2] != n) throw TopologyError("role counts must sum to the node count");
    if (n == 0) return {};

    const std::uint32_t n_subnets = *std::max_element(subnet.begin(), subnet.end()) + 1;
    std::vector<std::vector<std::uint32_t>> members(n_subnets);
    for (std::uint32_t v = 0; v < n; ++v) members[subnet[v]].push_back(v);

    // Floors of the exact proportional quotas; remainders are kept as exact
    // integer numerators over n.
    std::vector<std::array<std::uint64_t, 3>> quota(n_subnets);
    std::vector<std::uint64_t> seats(n_subnets);
    std::array<std::uint64_t, 3> left = {want[0], want[1], want[2]};
    struct Candidate {
        std::uint64_t remainder;
        std::uint32_t subnet;
        std::uint32_t role;
    };
    std::vector<Candidate> candidates;
    for (std::uint32_t s = 0; s < n_subnets; ++s) {
        const std::uint64_t size = members[s].size();
        std::uint64_t used = 0;
        for (std::uint32_t r = 0; r < 3; ++r) {
            quota[s][r] = size * want[r] / n;
            used += quota[s][r];
            left[r] -= quota[s][r];
            if (const std::uint64_t rem = size * want[r] % n; rem > 0) candidates.push_back({rem, s, r});
        }
        if (used > size) throw TopologyError("role quota exceeds subnet size");
        seats[s] = size - used;
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return a.remainder > b.remainder;
    });
    for (const Candidate& c : candidates) {
        if (seats[c.subnet] > 0 && left[c.role] > 0) {
            ++quota[c.subnet][c.role];
            --seats[c.subnet];
            --left[c.role];
        }
    }
    // The greedy pass can strand a seat whose fractional roles are exhausted.
    for (std::uint32_t s = 0; s < n_subnets; ++s) {
        for (std::uint32_t r = 0; r < 3 && seats[s] > 0; ++r) {
            const std::uint64_t take = std::min(seats[s], left[r]);
            quota[s][r] += take;
            seats[s] -= take;
            left[r] -= take;
        }
    }

    Rng rng(seed);
    std::vector<Role> roles(n, Role::Distribution);
    constexpr Role kOrder[3] = {Role::Generation, Role::Transmission, Role::Distribution};
    for (std::uint32_t s = 0; s < n_subnets; ++s) {
        auto nodes = members[s];
        shuffle(nodes, rng);
        std::size_t pos = 0;
        for (std::uint32_t r = 0; r < 3; ++r)
            for (std::uint64_t i = 0; i < quota[s][r]; ++i) roles[nodes[pos++]] = kOrder[r];
    }
    return roles;
}

Network generate_comm(const CommGenParams& p) {
    if (p.m < 1) throw TopologyError("attachment count m must be >= 1");
    if (p.n_nodes <= p.m) throw TopologyError("comm network needs more than m nodes");

    Rng rng(p.seed);
    std::vector<Edge> edges;
    // Each node appears once per incident edge, so a uniform draw from this
    // list is a degree-proportional draw.
    std::vector<std::uint32_t> endpoints;
    for (std::uint32_t u = 0; u < p.m; ++u) {
        for (std::uint32_t v = u + 1; v < p.m; ++v) {
            edges.push_back({u, v});
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }
    std::vector<std::uint32_t> chosen;
    for (std::uint32_t v = p.m; v < p.n_nodes; ++v) {
        chosen.clear();
        while (chosen.size() < p.m) {
            const std::uint32_t t = endpoints.empty()
                                        ? static_cast<std::uint32_t>(rng.below(v))
                                        : endpoints[rng.below(endpoints.size())];
            if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
        }
        for (std::uint32_t t : chosen) {
            edges.push_back({t, v});
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }

    Network net;
    net.graph = Graph(p.n_nodes, std::move(edges));
    net.roles.assign(p.n_nodes, Role::Relay);
    std::uint32_t hub = 0;
    for (std::uint32_t v = 1; v < p.n_nodes; ++v)
        if (net.graph.degree(v) > net.graph.degree(hub)) hub = v;
    net.roles[hub] = Role::ControlCenter;
    return net;
}

std::vector<Point> assign_coordinates(const Graph& graph, BoundingBox box, std::uint64_t seed) {
    if (!(box.x_max > box.x_min && box.y_max > box.y_min))
        throw TopologyError("bounding box must have positive area");
    Rng rng(seed);
    std::vector<Point> out(graph.num_nodes());
    for (Point& pt : out) {
        pt.x = box.x_min + (box.x_max - box.x_min) * rng.unit();
        pt.y = box.y_min + (box.y_max - box.y_min) * rng.unit();
    }
    return out;
}

const char* to_string(CouplingScheme s) {
    switch (s) {
        case CouplingScheme::RandomHint: return "random";
        case CouplingScheme::GeographicHint: return "geographic";
        case CouplingScheme::KN: return "kn";
    }
    return "?";
}

std::optional<CouplingScheme> parse_coupling(std::string_view s) {
    if (s == "random") return CouplingScheme::RandomHint;
    if (s == "geographic") return CouplingScheme::GeographicHint;
    if (s == "kn") return CouplingScheme::KN;
    return std::nullopt;
}

namespace {

std::vector<std::uint32_t> with_role(const Network& net, Role r) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < net.roles.size(); ++i)
        if (net.roles[i] == r) out.push_back(i);
    return out;
}

std::uint32_t nearest(const Point& from, const std::vector<Point>& coords,
                      const std::vector<std::uint32_t>& candidates) {
    std::uint32_t best = candidates.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::uint32_t c : candidates) {
        const double dx = coords[c].x - from.x;
        const double dy = coords[c].y - from.y;
        const double d = dx * dx + dy * dy;
        if (d < best_d) {  // strict: first (lowest index) candidate wins ties
            best_d = d;
            best = c;
        }
    }
    return best;
}

}  // namespace

InterSystem couple(const Network& power_side, const Network& comm_side, const CouplingSpec& spec) {
    const auto np = power_side.graph.num_nodes();
    const auto nc = comm_side.graph.num_nodes();
    const auto distribution = with_role(power_side, Role::Distribution);
    const auto relays = with_role(comm_side, Role::Relay);
    const auto centers = with_role(comm_side, Role::ControlCenter);
    if (distribution.empty()) throw TopologyError("coupling needs at least one distribution node");
    if (centers.empty()) throw TopologyError("coupling needs at least one control center");

    Rng rng(spec.seed);
    std::vector<Arc> a_ctrl, a_energy, a_info;

    switch (spec.scheme) {
        case CouplingScheme::RandomHint:
        case CouplingScheme::GeographicHint: {
            if (relays.empty()) throw TopologyError("coupling needs at least one relay");
            const bool geo = spec.scheme == CouplingScheme::GeographicHint;
            if (geo && (!power_side.coords || !comm_side.coords))
                throw TopologyError("geographic coupling needs coordinates on both networks");
            for (std::uint32_t v = 0; v < np; ++v)
                for (std::uint32_t q : centers) a_ctrl.push_back({power(v), comm(q)});
            for (std::uint32_t v = 0; v < np; ++v) {
                const std::uint32_t r = geo ? nearest((*power_side.coords)[v], *comm_side.coords, relays)
                                            : relays[rng.below(relays.size())];
                a_info.push_back({power(v), comm(r)});
            }
            for (std::uint32_t u = 0; u < nc; ++u) {
                const std::uint32_t d = geo ? nearest((*comm_side.coords)[u], *power_side.coords, distribution)
                                            : distribution[rng.below(distribution.size())];
                a_energy.push_back({comm(u), power(d)});
            }
            break;
        }
        case CouplingScheme::KN: {
            const std::uint64_t k = spec.k;
            const std::uint64_t cc = centers.size();
            const std::uint64_t cap = spec.n ? spec.n : (k * np + cc - 1) / cc;
            if (k < 1 || k > cc || k * np > cap * cc)
                throw TopologyError("k-n dependency infeasible: k=" + std::to_string(k) + " n=" +
                                    std::to_string(cap) + " for " + std::to_string(np) +
                                    " power nodes and " + std::to_string(cc) + " control nodes");
            std::vector<std::uint64_t> remaining(cc, cap);
            std::vector<std::uint32_t> order(np);
            std::iota(order.begin(), order.end(), 0u);
            shuffle(order, rng);
            std::vector<std::pair<std::uint64_t, std::uint64_t>> keyed(cc);
            std::vector<std::uint32_t> picks(cc);
            // Taking the k controllers with most remaining capacity (random
            // among equals) never strands a later power node.
            for (std::uint32_t v : order) {
                for (std::uint32_t i = 0; i < cc; ++i) keyed[i] = {remaining[i], rng.next()};
                std::iota(picks.begin(), picks.end(), 0u);
                std::partial_sort(picks.begin(), picks.begin() + k, picks.end(),
                                  [&](std::uint32_t a, std::uint32_t b) {
                                      return keyed[a].first != keyed[b].first
                                                 ? keyed[a].first > keyed[b].first
                                                 : keyed[a].second < keyed[b].second;
                                  });
                for (std::uint64_t j = 0; j < k; ++j) {
                    --remaining[picks[j]];
                    a_ctrl.push_back({power(v), comm(centers[picks[j]])});
                }
            }
            std::sort(a_ctrl.begin(), a_ctrl.end());
            for (std::uint32_t u = 0; u < nc; ++u)
                a_energy.push_back({comm(u), power(distribution[rng.below(distribution.size())])});
            break;
        }
    }

    return InterSystem(power_side.graph, power_side.roles, comm_side.graph, comm_side.roles,
                       std::move(a_ctrl), std::move(a_energy), std::move(a_info), std::nullopt,
                       power_side.coords, comm_side.coords);
}

}  // namespace interdep
