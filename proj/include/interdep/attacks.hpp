#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "interdep/net_core.hpp"

namespace interdep {

class AttackError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class AttackStrategy : std::uint8_t {
    RandomUniform,
    TargetedInterDegree,
    TargetedIntraDegree,
    Explicit,
};

const char* to_string(AttackStrategy s);
std::optional<AttackStrategy> parse_strategy(std::string_view s);

struct AttackSpec {
    AttackStrategy strategy = AttackStrategy::RandomUniform;
    Side side = Side::Power;
    std::optional<Role> role;
    std::uint32_t count = 0;
    std::vector<NodeId> ids;  // Explicit only
    std::uint64_t seed = 0;
};

/// Nodes of `side` (optionally restricted to `role`), ascending.
std::vector<std::uint32_t> eligible_population(const InterSystem& system, Side side,
                                               std::optional<Role> role);

/// Initial failure set, sorted ascending. Targeted strategies take the top
/// `count` nodes by degree, simultaneously, ties to the lower index.
std::vector<NodeId> select_targets(const InterSystem& system, const AttackSpec& spec);

}  // namespace interdep
