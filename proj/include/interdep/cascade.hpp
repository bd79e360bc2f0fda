#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "interdep/models.hpp"
#include "interdep/net_core.hpp"

namespace interdep {

enum class Schedule : std::uint8_t {
    /// Each round applies the whole evaluator once to the alive set.
    WholeSweep,
    /// Each round runs power-intra, power-inter, comm-intra, comm-inter in
    /// turn, removing failures after every phase.
    FourPhase,
};

struct CascadeOptions {
    Schedule schedule = Schedule::WholeSweep;
};

struct LoggedEvent {
    std::uint32_t round = 0;
    NodeId node;
    FailureReason reason = FailureReason::InitialAttack;
};

struct CascadeReport {
    std::vector<NodeId> initial_attack;
    /// Failure batches for rounds 1, 2, ... ; the terminating empty sweep is
    /// not stored.
    std::vector<std::vector<FailureEvent>> per_round;
    AliveSet steady_state;
    /// Rounds executed, counting the attack round when it removed anything
    /// and the final sweep that found nothing.
    std::uint32_t rounds = 0;
    Schedule schedule = Schedule::WholeSweep;

    std::array<std::uint32_t, 2> failed_by_side{};
    std::array<std::uint32_t, 5> failed_by_role{};

    std::uint32_t failed_total() const { return failed_by_side[0] + failed_by_side[1]; }
    std::uint32_t failed(Side s) const { return failed_by_side[static_cast<int>(s)]; }
    std::uint32_t failed(Role r) const { return failed_by_role[static_cast<int>(r)]; }

    /// Flattened log: round 0 carries the attack, round t the t-th batch.
    std::vector<LoggedEvent> events() const;
};

/// Runs the model to its fixpoint from `initial`. Throws ModelError when the
/// system fails validation for the model, GraphError for unknown nodes.
CascadeReport run_cascade(const InterSystem& system, const ModelSpec& model,
                          const std::vector<NodeId>& initial, CascadeOptions options = {});
CascadeReport run_cascade(const FailureModel& model, const std::vector<NodeId>& initial,
                          CascadeOptions options = {});

/// Independent check of a report: each batch must be exactly what the model
/// produces from the replayed alive set under the report's schedule, the
/// replay must end at the stored steady state, and the model must find
/// nothing further to fail there.
bool verify_fixpoint(const InterSystem& system, const ModelSpec& model, const CascadeReport& report);
bool verify_fixpoint(const FailureModel& model, const CascadeReport& report);

}  // namespace interdep
