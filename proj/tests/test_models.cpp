#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "interdep/models.hpp"
#include "support.hpp"

using namespace interdep;
using namespace fixture;

namespace {

AliveSet without(const InterSystem& s, std::initializer_list<NodeId> dead) {
    AliveSet a = AliveSet::all(s);
    for (NodeId n : dead) a.kill(n);
    return a;
}

std::vector<std::vector<std::uint32_t>> bipartite_adjacency(const InterSystem& s) {
    std::vector<std::set<std::uint32_t>> adj(s.size(Side::Power));
    for (const auto* arcs : {&s.a_ctrl(), &s.a_energy(), &s.a_info()})
        for (const Arc& a : *arcs) {
            const NodeId p = a.src.side == Side::Power ? a.src : a.dst;
            const NodeId c = a.src.side == Side::Power ? a.dst : a.src;
            adj[p.index].insert(c.index);
        }
    std::vector<std::vector<std::uint32_t>> out;
    for (auto& row : adj) out.emplace_back(row.begin(), row.end());
    return out;
}

// Random bipartite system with only info arcs, for matching checks.
InterSystem random_bipartite(Rng& rng) {
    const auto np = static_cast<std::uint32_t>(1 + rng.below(8));
    const auto nc = static_cast<std::uint32_t>(1 + rng.below(8));
    const double p = rng.unit() * 0.6;
    std::vector<Arc> info;
    for (std::uint32_t a = 0; a < np; ++a)
        for (std::uint32_t b = 0; b < nc; ++b)
            if (rng.chance(p)) info.push_back({power(a), comm(b)});
    return InterSystem(Graph(np, {}), std::vector<Role>(np, Role::Transmission), Graph(nc, {}),
                       std::vector<Role>(nc, Role::Relay), {}, {}, std::move(info));
}

bool is_matching(const InterSystem& s, const UniformView& v) {
    const auto adj = bipartite_adjacency(s);
    std::size_t covered = 0;
    for (std::uint32_t p = 0; p < v.power_partner.size(); ++p) {
        const auto c = v.power_partner[p];
        if (c == UniformView::kUnpaired) continue;
        ++covered;
        if (v.comm_partner[c] != p) return false;
        if (!std::binary_search(adj[p].begin(), adj[p].end(), c)) return false;
    }
    return covered == v.pairs() && v.unmatched.size() == s.total_nodes() - 2 * covered;
}

}  // namespace

TEST_CASE("uniform view on the fixture") {
    const InterSystem s = load_unpinned();
    const UniformView v = build_uniform_view(s);
    CHECK(v.pairs() == 7);
    CHECK(v.unmatched.empty());
    CHECK(is_matching(s, v));

    const UniformView pinned = uniform_view_from_pairs(load());
    CHECK(pinned.power_partner == std::vector<std::uint32_t>{R1, R5, R2, CC, R3, R4, R6});
    CHECK_THROWS_AS(uniform_view_from_pairs(s), ModelError);
}

TEST_CASE("uniform view edge cases") {
    SUBCASE("no arcs leaves everything unmatched") {
        const InterSystem s(Graph(3, {}), std::vector<Role>(3, Role::Generation), Graph(2, {}),
                            std::vector<Role>(2, Role::Relay), {}, {}, {});
        const UniformView v = build_uniform_view(s);
        CHECK(v.pairs() == 0);
        CHECK(v.unmatched.size() == 5);
    }
    SUBCASE("star into one comm node") {
        const InterSystem s(Graph(3, {}), std::vector<Role>(3, Role::Generation), Graph(1, {}),
                            {Role::Relay}, {}, {}, {{power(0), comm(0)}, {power(1), comm(0)}, {power(2), comm(0)}});
        const UniformView v = build_uniform_view(s);
        CHECK(v.pairs() == 1);
        CHECK(v.unmatched == std::vector<NodeId>{power(1), power(2)});
    }
}

TEST_CASE("matching is maximum against exhaustive enumeration") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const InterSystem s = random_bipartite(rng);
        const UniformView v = build_uniform_view(s);
        REQUIRE(is_matching(s, v));
        CHECK(v.pairs() == oracle::brute_max_matching(bipartite_adjacency(s), s.size(Side::Comm)));
    }
}

TEST_CASE("uniform evaluator") {
    const InterSystem s = load();
    const UniformView v = uniform_view_from_pairs(s);
    CHECK(evaluate_uniform(s, v, AliveSet::all(s)).empty());

    const auto r1 = evaluate_uniform(s, v, without(s, {power(D3)}));
    CHECK(r1 == std::vector<FailureEvent>{{comm(R6), FailureReason::DependencyPartnerFailed}});
    CHECK(evaluate_uniform(s, v, without(s, {power(D3), comm(R6)})).empty());

    // G1 is a leaf on T1; killing T1 isolates G1 while its partner R1 lives.
    const auto r2 = evaluate_uniform(s, v, without(s, {power(T1), comm(R2)}));
    REQUIRE(!r2.empty());
    CHECK(r2.front() == FailureEvent{power(G1), FailureReason::NotInGiantComponent});
}

TEST_CASE("small clusters evaluator") {
    const InterSystem s = load();
    CHECK(evaluate_sc(s, AliveSet::all(s), 4).empty());

    const AliveSet a = without(s, {power(D3)});
    CHECK(evaluate_sc(s, a, 4) == std::vector<FailureEvent>{{comm(R6), FailureReason::NoAliveInterlink}});
    CHECK(evaluate_sc(s, without(s, {power(D3), comm(R6)}), 4).empty());
    CHECK(evaluate_sc(s, without(s, {power(D3), comm(R6)}), 6).empty());

    const auto big = evaluate_sc(s, without(s, {power(D3), comm(R6)}), 7);
    CHECK(big.size() == 12);
    for (const auto& e : big) CHECK(e.reason == FailureReason::ComponentBelowDelta);
}

TEST_CASE("small clusters with delta 1 fails exactly the nodes without an alive inter-neighbour") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const InterSystem s = oracle::random_system(rng, 20);
        const AliveSet alive = oracle::random_alive_set(rng, s, 0.7);
        std::vector<FailureEvent> expect;
        for (Side side : {Side::Power, Side::Comm})
            for (std::uint32_t i = 0; i < s.size(side); ++i) {
                const NodeId n{side, i};
                if (!alive[n]) continue;
                bool linked = false;
                for (const auto* arcs : {&s.a_ctrl(), &s.a_energy()})
                    for (const Arc& arc : *arcs) {
                        if (arc.src == n && alive[arc.dst]) linked = true;
                        if (arc.dst == n && alive[arc.src]) linked = true;
                    }
                if (!linked) expect.push_back({n, FailureReason::NoAliveInterlink});
            }
        CHECK(evaluate_sc(s, alive, 1) == expect);
    }
}

TEST_CASE("hint evaluator on the fixture") {
    const InterSystem s = load();
    CHECK(evaluate_hint(s, AliveSet::all(s)).empty());
    CHECK(evaluate_hint(s, without(s, {power(D3)})) ==
          std::vector<FailureEvent>{{comm(R6), FailureReason::NoPowerSupplier}});
    CHECK(evaluate_hint(s, without(s, {power(D3), comm(R6)})) ==
          std::vector<FailureEvent>{{power(T2), FailureReason::AllAccessRelaysFailed}});
    CHECK(evaluate_hint(s, without(s, {power(D3), comm(R6), power(T2)})) ==
          std::vector<FailureEvent>{{power(D2), FailureReason::NoPathToGenerator}});

    // With the control center down every power node loses control first.
    const auto cc = evaluate_hint(s, without(s, {comm(CC)}));
    CHECK(cc.size() == 7);
    for (const auto& e : cc) CHECK(e.reason == FailureReason::AllControlCentersFailed);

    // Cutting R5 from CC inside the comm graph, with R5 still alive.
    const auto cut = evaluate_hint(s, without(s, {comm(R3), comm(R4)}));
    bool saw_no_path = false;
    for (const auto& e : cut) saw_no_path |= e.reason == FailureReason::NoControlPath;
    CHECK(saw_no_path);
}

TEST_CASE("hint: losing every generator takes down the rest") {
    const InterSystem s = load();
    const auto first = evaluate_hint(s, without(s, {power(G1), power(G2)}));
    std::vector<FailureEvent> expect;
    for (auto v : {T1, T2, D1, D2, D3}) expect.push_back({power(v), FailureReason::NoPathToGenerator});
    CHECK(first == expect);

    AliveSet a = without(s, {power(G1), power(G2)});
    for (const auto& e : first) a.kill(e.node);
    const auto second = evaluate_hint(s, a);
    CHECK(second.size() == 7);
    for (const auto& e : second) CHECK(e.reason == FailureReason::NoPowerSupplier);
}

TEST_CASE("evaluators never report dead nodes and order events power first") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const InterSystem s = oracle::random_system(rng, 30);
        const AliveSet alive = oracle::random_alive_set(rng, s, 0.8);
        for (const ModelSpec& m : {ModelSpec::uniform(), ModelSpec::small_clusters(3), ModelSpec::hint()}) {
            const auto ev = FailureModel(s, m).evaluate(alive);
            for (std::size_t i = 0; i < ev.size(); ++i) {
                CHECK(alive[ev[i].node]);
                if (i) CHECK(ev[i - 1].node < ev[i].node);
            }
        }
    }
}

TEST_CASE("validation for models") {
    const InterSystem s = load();
    CHECK(validate_for_model(s, ModelSpec::hint()).empty());
    CHECK(validate_for_model(s, ModelSpec::small_clusters(1)).empty());
    CHECK(validate_for_model(s, ModelSpec::small_clusters(0)).size() == 1);

    const InterSystem bare(s.power_graph(), s.roles(Side::Power), s.comm_graph(), s.roles(Side::Comm), {}, {}, {});
    const auto v = validate_for_model(bare, ModelSpec::hint());
    CHECK(v.size() == 7);
    CHECK(v[0].find("underspecified dependency") != std::string::npos);
    CHECK_THROWS_AS(FailureModel(bare, ModelSpec::hint()), ModelError);
    CHECK_NOTHROW(FailureModel(bare, ModelSpec::uniform()));
}

namespace {

// Counts nodes that fail under `big` but survive under `small` (a subset of
// big), grouped by the reason given under `big`.
std::array<std::size_t, 11> monotonicity_violations(const ModelSpec& spec, std::uint64_t seed) {
    std::array<std::size_t, 11> out{};
    Rng rng(seed);
    for (int trial = 0; trial < 200; ++trial) {
        const InterSystem s = oracle::random_system(rng, 30);
        const AliveSet big = oracle::random_alive_set(rng, s, 0.9);
        const AliveSet small = oracle::random_subset(rng, big, 0.8);
        const FailureModel model(s, spec);
        const auto under_small = model.evaluate(small);
        for (const auto& e : model.evaluate(big)) {
            if (!small[e.node]) continue;
            const bool found = std::any_of(under_small.begin(), under_small.end(),
                                           [&](const FailureEvent& f) { return f.node == e.node; });
            if (!found) ++out[static_cast<int>(e.reason)];
        }
    }
    return out;
}

std::size_t sum(const std::array<std::size_t, 11>& a) {
    std::size_t t = 0;
    for (auto v : a) t += v;
    return t;
}

}  // namespace

TEST_CASE("small clusters and hint evaluators are monotone") {
    CHECK(sum(monotonicity_violations(ModelSpec::small_clusters(3), 31337)) == 0);
    CHECK(sum(monotonicity_violations(ModelSpec::small_clusters(1), 31338)) == 0);
    CHECK(sum(monotonicity_violations(ModelSpec::hint(), 31339)) == 0);
}

// Unmatched is static and a dead partner stays dead in any subset, so only
// the giant-component rule can break monotonicity. It does: removing nodes
// can demote the current giant and promote a smaller component.
TEST_CASE("uniform is monotone except through giant component reselection") {
    auto v = monotonicity_violations(ModelSpec::uniform(), 31337);
    v[static_cast<int>(FailureReason::NotInGiantComponent)] = 0;
    CHECK(sum(v) == 0);
}

TEST_CASE("uniform giant component reselection counterexample") {
    // Power: path 0-1-2 plus edge 3-4. Comm: a star around 4. Pairs i <-> i.
    std::vector<Arc> info;
    for (std::uint32_t i = 0; i < 5; ++i) info.push_back({power(i), comm(i)});
    const InterSystem s(Graph(5, {{0, 1}, {1, 2}, {3, 4}}), std::vector<Role>(5, Role::Transmission),
                        Graph(5, {{0, 4}, {1, 4}, {2, 4}, {3, 4}}), std::vector<Role>(5, Role::Relay), {}, {},
                        info);
    const FailureModel model(s, ModelSpec::uniform());

    const auto full = model.evaluate(AliveSet::all(s));
    CHECK(full == std::vector<FailureEvent>{{power(3), FailureReason::NotInGiantComponent},
                                            {power(4), FailureReason::NotInGiantComponent}});

    AliveSet fewer = AliveSet::all(s);
    fewer.kill(power(1));
    fewer.kill(comm(1));
    // {3,4} is now the giant; 0 and 2 are stranded instead, 3 and 4 survive.
    const auto after = model.evaluate(fewer);
    CHECK(after.size() == 2);
    CHECK(after[0].node == power(0));
    CHECK(after[1].node == power(2));
}
