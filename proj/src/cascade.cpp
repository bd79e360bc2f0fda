#include "interdep/cascade.hpp"

#include <algorithm>

namespace interdep {

std::vector<LoggedEvent> CascadeReport::events() const {
    std::vector<LoggedEvent> out;
    for (const NodeId& n : initial_attack) out.push_back({0, n, FailureReason::InitialAttack});
    for (std::uint32_t r = 0; r < per_round.size(); ++r)
        for (const FailureEvent& e : per_round[r]) out.push_back({r + 1, e.node, e.reason});
    return out;
}

namespace {

constexpr Phase kPhases[] = {Phase::PowerIntra, Phase::PowerInter, Phase::CommIntra, Phase::CommInter};

void tally(const InterSystem& system, CascadeReport& report, NodeId n) {
    ++report.failed_by_side[static_cast<int>(n.side)];
    ++report.failed_by_role[static_cast<int>(system.role(n))];
}

void remove_all(AliveSet& alive, const std::vector<FailureEvent>& batch) {
    for (const FailureEvent& e : batch) alive.kill(e.node);
}

// One round under `schedule`; failures are removed from `alive` as they occur.
std::vector<FailureEvent> sweep(const FailureModel& model, AliveSet& alive, Schedule schedule) {
    if (schedule == Schedule::WholeSweep) {
        auto batch = model.evaluate(alive);
        remove_all(alive, batch);
        return batch;
    }
    std::vector<FailureEvent> batch;
    for (Phase p : kPhases) {
        auto part = model.evaluate(alive, p);
        remove_all(alive, part);
        batch.insert(batch.end(), part.begin(), part.end());
    }
    return batch;
}

}  // namespace

CascadeReport run_cascade(const InterSystem& system, const ModelSpec& model,
                          const std::vector<NodeId>& initial, CascadeOptions options) {
    const FailureModel bound(system, model);
    return run_cascade(bound, initial, options);
}

CascadeReport run_cascade(const FailureModel& model, const std::vector<NodeId>& initial,
                          CascadeOptions options) {
    const InterSystem& system = model.system();
    CascadeReport report;
    report.schedule = options.schedule;
    report.steady_state = AliveSet::all(system);
    AliveSet& alive = report.steady_state;

    for (const NodeId& n : initial) {
        if (!system.contains(n)) throw GraphError("no such node: " + describe(n));
        if (!alive[n]) continue;
        alive.kill(n);
        report.initial_attack.push_back(n);
        tally(system, report, n);
    }
    if (!report.initial_attack.empty()) report.rounds = 1;

    // Each productive round kills at least one node, so this loop runs at
    // most |V| + 1 times.
    for (;;) {
        ++report.rounds;
        auto batch = sweep(model, alive, options.schedule);
        if (batch.empty()) break;
        for (const FailureEvent& e : batch) tally(system, report, e.node);
        report.per_round.push_back(std::move(batch));
    }
    return report;
}

bool verify_fixpoint(const InterSystem& system, const ModelSpec& model, const CascadeReport& report) {
    const FailureModel bound(system, model);
    return verify_fixpoint(bound, report);
}

bool verify_fixpoint(const FailureModel& model, const CascadeReport& report) {
    const InterSystem& system = model.system();
    if (report.steady_state.flags(Side::Power).size() != system.size(Side::Power) ||
        report.steady_state.flags(Side::Comm).size() != system.size(Side::Comm))
        return false;

    AliveSet replay = AliveSet::all(system);
    auto fail_once = [&](const NodeId& n) {
        if (!system.contains(n) || !replay[n]) return false;
        replay.kill(n);
        return true;
    };
    for (const NodeId& n : report.initial_attack)
        if (!fail_once(n)) return false;
    for (const auto& batch : report.per_round) {
        if (batch.empty()) return false;
        AliveSet expected = replay;
        if (sweep(model, expected, report.schedule) != batch) return false;
        for (const FailureEvent& e : batch)
            if (!fail_once(e.node)) return false;
    }
    if (!(replay == report.steady_state)) return false;
    AliveSet last = replay;
    return sweep(model, last, report.schedule).empty();
}

}  // namespace interdep
