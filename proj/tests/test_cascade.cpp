#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "interdep/cascade.hpp"
#include "support.hpp"

using namespace interdep;
using namespace fixture;

namespace {

std::vector<NodeId> failed_nodes(const InterSystem& s, const CascadeReport& r) {
    std::vector<NodeId> out;
    for (Side side : {Side::Power, Side::Comm})
        for (std::uint32_t i = 0; i < s.size(side); ++i)
            if (!r.steady_state[{side, i}]) out.push_back({side, i});
    return out;
}

std::vector<NodeId> random_attack(Rng& rng, const InterSystem& s, double p) {
    std::vector<NodeId> out;
    for (Side side : {Side::Power, Side::Comm})
        for (std::uint32_t i = 0; i < s.size(side); ++i)
            if (rng.chance(p)) out.push_back({side, i});
    return out;
}

const ModelSpec kModels[] = {ModelSpec::uniform(), ModelSpec::small_clusters(3), ModelSpec::hint()};

}  // namespace

TEST_CASE("empty attack on a healthy system") {
    const InterSystem s = load();
    for (const ModelSpec& m : {ModelSpec::uniform(), ModelSpec::small_clusters(4), ModelSpec::hint()}) {
        const CascadeReport r = run_cascade(s, m, {});
        CHECK(r.failed_total() == 0);
        CHECK(r.rounds == 1);
        CHECK(r.per_round.empty());
        CHECK(r.steady_state == AliveSet::all(s));
    }
}

// Hand trace of the five HINT rules on the fixture after losing D3:
//   round 0  D3                      initial attack
//   round 1  R6                      no power supplier (D3 was its only one)
//   round 2  T2                      its only access relay R6 is gone
//   round 3  D2                      T2 was its only link toward a generator
//   round 4  R3 R4 R5                all drew power from D2 alone
//   round 5  G2 D1                   access relays R5 and R3 are gone
//   round 6  CC R1 R2                their only supplier D1 is gone
//   round 7  G1 T1                   the control center is gone
//   round 8  nothing left to fail
TEST_CASE("hint collapses the fixture from D3") {
    const InterSystem s = load();
    const CascadeReport r = run_cascade(s, ModelSpec::hint(), {power(D3)});
    using R = FailureReason;
    const std::vector<std::vector<FailureEvent>> expect = {
        {{comm(R6), R::NoPowerSupplier}},
        {{power(T2), R::AllAccessRelaysFailed}},
        {{power(D2), R::NoPathToGenerator}},
        {{comm(R3), R::NoPowerSupplier}, {comm(R4), R::NoPowerSupplier}, {comm(R5), R::NoPowerSupplier}},
        {{power(G2), R::AllAccessRelaysFailed}, {power(D1), R::AllAccessRelaysFailed}},
        {{comm(CC), R::NoPowerSupplier}, {comm(R1), R::NoPowerSupplier}, {comm(R2), R::NoPowerSupplier}},
        {{power(G1), R::AllControlCentersFailed}, {power(T1), R::AllControlCentersFailed}},
    };
    CHECK(r.per_round == expect);
    CHECK(r.initial_attack == std::vector<NodeId>{power(D3)});
    CHECK(r.steady_state.count() == 0);
    CHECK(r.failed_total() == 14);
    CHECK(r.rounds == 9);
    CHECK(r.failed(Role::Generation) == 2);
    CHECK(r.failed(Role::Relay) == 6);
    CHECK(verify_fixpoint(s, ModelSpec::hint(), r));

    const auto ev = r.events();
    REQUIRE(ev.size() == 14);
    CHECK(ev[0].round == 0);
    CHECK(ev[0].reason == R::InitialAttack);
    CHECK(ev.back().round == 7);
}

TEST_CASE("small clusters and pinned uniform stop after R6") {
    const InterSystem s = load();
    const std::vector<NodeId> expect = {power(D3), comm(R6)};
    for (std::uint32_t delta = 1; delta <= 5; ++delta) {
        CAPTURE(delta);
        const CascadeReport r = run_cascade(s, ModelSpec::small_clusters(delta), {power(D3)});
        CHECK(failed_nodes(s, r) == expect);
        CHECK(r.rounds == 3);
    }
    const CascadeReport u = run_cascade(s, ModelSpec::uniform(), {power(D3)});
    CHECK(failed_nodes(s, u) == expect);
    CHECK(u.rounds == 3);
}

TEST_CASE("unpinned uniform uses the computed matching") {
    const InterSystem s = load_unpinned();
    const CascadeReport r = run_cascade(s, ModelSpec::uniform(), {power(D3)});
    CHECK(r.failed_total() == 2);
    CHECK(verify_fixpoint(s, ModelSpec::uniform(), r));
}

TEST_CASE("cascade rejects bad input") {
    const InterSystem s = load();
    CHECK_THROWS_AS(run_cascade(s, ModelSpec::hint(), {power(7)}), GraphError);
    const InterSystem bare(s.power_graph(), s.roles(Side::Power), s.comm_graph(), s.roles(Side::Comm), {}, {}, {});
    CHECK_THROWS_AS(run_cascade(bare, ModelSpec::hint(), {}), ModelError);
    CHECK_THROWS_AS(run_cascade(s, ModelSpec::small_clusters(0), {}), ModelError);
}

TEST_CASE("verify_fixpoint catches tampered reports") {
    const InterSystem s = load();
    const ModelSpec sc = ModelSpec::small_clusters(4);
    const CascadeReport good = run_cascade(s, sc, {power(D3)});
    REQUIRE(verify_fixpoint(s, sc, good));

    SUBCASE("steady-state node deleted") {
        CascadeReport bad = good;
        bad.steady_state.kill(power(G1));
        CHECK_FALSE(verify_fixpoint(s, sc, bad));
    }
    SUBCASE("spurious failure appended") {
        CascadeReport bad = good;
        bad.per_round.push_back({{power(G1), FailureReason::ComponentBelowDelta}});
        bad.steady_state.kill(power(G1));
        CHECK_FALSE(verify_fixpoint(s, sc, bad));
    }
    SUBCASE("node failing twice") {
        CascadeReport bad = good;
        bad.per_round.push_back({{comm(R6), FailureReason::NoAliveInterlink}});
        CHECK_FALSE(verify_fixpoint(s, sc, bad));
    }
    SUBCASE("stopped early") {
        const CascadeReport hint = run_cascade(s, ModelSpec::hint(), {power(D3)});
        CascadeReport bad = hint;
        bad.per_round.resize(2);
        bad.steady_state = AliveSet::all(s);
        bad.steady_state.kill(power(D3));
        for (const auto& batch : bad.per_round)
            for (const auto& e : batch) bad.steady_state.kill(e.node);
        CHECK_FALSE(verify_fixpoint(s, ModelSpec::hint(), bad));
    }
}

TEST_CASE("random cascades reach a verified fixpoint within the round bound") {
    Rng rng(8080);
    for (int trial = 0; trial < 100; ++trial) {
        const InterSystem s = oracle::random_system(rng, 50);
        const auto attack = random_attack(rng, s, 0.1);
        for (const ModelSpec& m : kModels) {
            const FailureModel model(s, m);
            for (Schedule sched : {Schedule::WholeSweep, Schedule::FourPhase}) {
                const CascadeReport r = run_cascade(model, attack, {sched});
                CHECK(verify_fixpoint(model, r));
                CHECK(r.rounds <= s.total_nodes() + 1);
                std::size_t logged = r.initial_attack.size();
                for (const auto& b : r.per_round) {
                    CHECK(!b.empty());
                    logged += b.size();
                }
                CHECK(logged + r.steady_state.count() == s.total_nodes());
            }
        }
    }
}

// Whole-sweep and four-phase schedules share their fixpoint whenever the
// evaluator is monotone. Uniform is left to the acceptance suite, which
// reports it against the full criterion.
TEST_CASE("schedules agree on the steady state for small clusters and hint") {
    Rng rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        const InterSystem s = oracle::random_system(rng, 50);
        const auto attack = random_attack(rng, s, 0.1);
        for (const ModelSpec& m : {ModelSpec::small_clusters(3), ModelSpec::hint()}) {
            const FailureModel model(s, m);
            const CascadeReport whole = run_cascade(model, attack);
            const CascadeReport phased = run_cascade(model, attack, {Schedule::FourPhase});
            CHECK(whole.steady_state == phased.steady_state);
        }
    }
}

TEST_CASE("superset attacks dominate for small clusters and hint") {
    Rng rng(1701);
    for (int trial = 0; trial < 100; ++trial) {
        const InterSystem s = oracle::random_system(rng, 30);
        auto attack = random_attack(rng, s, 0.1);
        auto bigger = attack;
        for (const NodeId& n : random_attack(rng, s, 0.1)) bigger.push_back(n);
        std::sort(bigger.begin(), bigger.end());
        bigger.erase(std::unique(bigger.begin(), bigger.end()), bigger.end());
        for (const ModelSpec& m : {ModelSpec::small_clusters(3), ModelSpec::hint()}) {
            const FailureModel model(s, m);
            const auto a = failed_nodes(s, run_cascade(model, attack));
            const auto b = failed_nodes(s, run_cascade(model, bigger));
            CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
        }
    }
}

TEST_CASE("four-phase schedule on the fixture keeps the same outcome") {
    const InterSystem s = load();
    const CascadeReport r = run_cascade(s, ModelSpec::hint(), {power(D3)}, {Schedule::FourPhase});
    CHECK(r.failed_total() == 14);
    CHECK(verify_fixpoint(s, ModelSpec::hint(), r));
}
