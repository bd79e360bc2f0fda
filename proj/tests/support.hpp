#pragma once

// Shared fixtures, random instance generators and brute-force oracles for the
// test suites. Nothing here calls into the code paths it is used to check.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "interdep/io.hpp"
#include "interdep/net_core.hpp"
#include "interdep/random.hpp"

namespace fixture {

using namespace interdep;

// Power indices of the golden scenario.
inline constexpr std::uint32_t G1 = 0, G2 = 1, T1 = 2, T2 = 3, D1 = 4, D2 = 5, D3 = 6;
// Comm indices.
inline constexpr std::uint32_t CC = 0, R1 = 1, R2 = 2, R3 = 3, R4 = 4, R5 = 5, R6 = 6;

inline InterSystem load() { return load_topology(FIXTURE_DIR).system; }

/// Fixture without the pinned one-to-one pairs.
inline InterSystem load_unpinned() {
    const InterSystem s = load();
    return InterSystem(s.power_graph(), s.roles(Side::Power), s.comm_graph(), s.roles(Side::Comm),
                       s.a_ctrl(), s.a_energy(), s.a_info());
}

}  // namespace fixture

namespace oracle {

using namespace interdep;

inline Graph random_graph(Rng& rng, std::uint32_t n, double p) {
    std::vector<Edge> edges;
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = a + 1; b < n; ++b)
            if (rng.chance(p)) edges.push_back({a, b});
    return Graph(n, std::move(edges));
}

inline std::vector<std::uint8_t> random_alive(Rng& rng, std::uint32_t n, double p_alive) {
    std::vector<std::uint8_t> out(n);
    for (auto& f : out) f = rng.chance(p_alive) ? 1 : 0;
    return out;
}

/// Reachability among alive nodes by repeated relaxation of the edge list
/// until nothing changes (transitive closure).
inline std::vector<std::vector<std::uint8_t>> closure(const Graph& g, const std::vector<std::uint8_t>& alive) {
    const std::uint32_t n = g.num_nodes();
    std::vector<std::vector<std::uint8_t>> reach(n, std::vector<std::uint8_t>(n, 0));
    for (std::uint32_t v = 0; v < n; ++v) reach[v][v] = alive[v];
    for (bool changed = true; changed;) {
        changed = false;
        for (const Edge& e : g.edges()) {
            if (!alive[e.a] || !alive[e.b]) continue;
            for (std::uint32_t x = 0; x < n; ++x) {
                if (reach[x][e.a] && !reach[x][e.b]) reach[x][e.b] = changed = true;
                if (reach[x][e.b] && !reach[x][e.a]) reach[x][e.a] = changed = true;
            }
        }
    }
    return reach;
}

/// Maximum matching size by exhaustive enumeration of all matchings.
inline std::size_t brute_max_matching(const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t n_right) {
    std::vector<std::uint8_t> used(n_right, 0);
    std::size_t best = 0;
    auto rec = [&](auto&& self, std::size_t i, std::size_t size) -> void {
        if (size + (adj.size() - i) <= best) return;
        if (i == adj.size()) {
            best = std::max(best, size);
            return;
        }
        self(self, i + 1, size);
        for (std::uint32_t c : adj[i]) {
            if (used[c]) continue;
            used[c] = 1;
            self(self, i + 1, size + 1);
            used[c] = 0;
        }
    };
    rec(rec, 0, 0);
    return best;
}

/// Random system that passes validate_for_model for every model: at least one
/// generator, distribution node and control center, every power node with
/// one or two ctrl and info arcs. Comm nodes get zero to two suppliers.
inline InterSystem random_system(Rng& rng, std::uint32_t max_nodes, double edge_p = -1.0) {
    const std::uint32_t half = std::max<std::uint32_t>(max_nodes / 2, 3);
    const auto np = static_cast<std::uint32_t>(3 + rng.below(half - 2));
    const auto nc = static_cast<std::uint32_t>(2 + rng.below(half - 1));
    const double p = edge_p > 0 ? edge_p : 0.1 + 0.4 * rng.unit();

    std::vector<Role> proles(np), croles(nc);
    for (auto& r : proles) r = static_cast<Role>(rng.below(3));
    proles[0] = Role::Generation;
    proles[1] = Role::Distribution;
    for (auto& r : croles) r = rng.chance(0.25) ? Role::ControlCenter : Role::Relay;
    croles[rng.below(nc)] = Role::ControlCenter;

    std::vector<std::uint32_t> centers, dist;
    for (std::uint32_t i = 0; i < nc; ++i)
        if (croles[i] == Role::ControlCenter) centers.push_back(i);
    for (std::uint32_t i = 0; i < np; ++i)
        if (proles[i] == Role::Distribution) dist.push_back(i);

    std::set<Arc> ctrl, info, energy;
    for (std::uint32_t v = 0; v < np; ++v) {
        const auto nctrl = 1 + rng.below(2);
        for (std::uint64_t j = 0; j < nctrl; ++j)
            ctrl.insert({power(v), comm(centers[rng.below(centers.size())])});
        const auto ninfo = 1 + rng.below(2);
        for (std::uint64_t j = 0; j < ninfo; ++j) info.insert({power(v), comm(static_cast<std::uint32_t>(rng.below(nc)))});
    }
    for (std::uint32_t u = 0; u < nc; ++u) {
        const auto nen = rng.chance(0.1) ? 0 : 1 + rng.below(2);
        for (std::uint64_t j = 0; j < nen; ++j) energy.insert({comm(u), power(dist[rng.below(dist.size())])});
    }
    return InterSystem(random_graph(rng, np, p), std::move(proles), random_graph(rng, nc, p), std::move(croles),
                       {ctrl.begin(), ctrl.end()}, {energy.begin(), energy.end()}, {info.begin(), info.end()});
}

inline AliveSet random_alive_set(Rng& rng, const InterSystem& s, double p_alive) {
    AliveSet a(s.size(Side::Power), s.size(Side::Comm));
    for (Side side : {Side::Power, Side::Comm})
        for (auto& f : a.flags(side)) f = rng.chance(p_alive) ? 1 : 0;
    return a;
}

/// Random subset of `alive` (each alive node kept with probability p_keep).
inline AliveSet random_subset(Rng& rng, const AliveSet& alive, double p_keep) {
    AliveSet out = alive;
    for (Side side : {Side::Power, Side::Comm})
        for (auto& f : out.flags(side))
            if (f && !rng.chance(p_keep)) f = 0;
    return out;
}

}  // namespace oracle
