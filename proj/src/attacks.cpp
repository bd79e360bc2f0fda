#include "interdep/attacks.hpp"

#include <algorithm>
#include <string>

#include "interdep/random.hpp"

namespace interdep {

const char* to_string(AttackStrategy s) {
    switch (s) {
        case AttackStrategy::RandomUniform: return "random";
        case AttackStrategy::TargetedInterDegree: return "inter-degree";
        case AttackStrategy::TargetedIntraDegree: return "intra-degree";
        case AttackStrategy::Explicit: return "explicit";
    }
    return "?";
}

std::optional<AttackStrategy> parse_strategy(std::string_view s) {
    for (AttackStrategy a : {AttackStrategy::RandomUniform, AttackStrategy::TargetedInterDegree,
                             AttackStrategy::TargetedIntraDegree, AttackStrategy::Explicit})
        if (s == to_string(a)) return a;
    return std::nullopt;
}

std::vector<std::uint32_t> eligible_population(const InterSystem& system, Side side,
                                               std::optional<Role> role) {
    if (role && side_of(*role) != side)
        throw AttackError(std::string("role ") + to_string(*role) + " does not exist in the " +
                          to_string(side) + " network");
    std::vector<std::uint32_t> out;
    const auto& roles = system.roles(side);
    for (std::uint32_t i = 0; i < roles.size(); ++i)
        if (!role || roles[i] == *role) out.push_back(i);
    return out;
}

std::vector<NodeId> select_targets(const InterSystem& system, const AttackSpec& spec) {
    std::vector<NodeId> out;
    if (spec.strategy == AttackStrategy::Explicit) {
        for (const NodeId& id : spec.ids) {
            if (!system.contains(id)) throw AttackError("no such node: " + describe(id));
            out.push_back(id);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    auto population = eligible_population(system, spec.side, spec.role);
    if (spec.count > population.size())
        throw AttackError("attack size " + std::to_string(spec.count) + " exceeds the " +
                          std::to_string(population.size()) + " eligible nodes");

    if (spec.strategy == AttackStrategy::RandomUniform) {
        // Partial Fisher-Yates: the first `count` slots are a uniform sample.
        Rng rng(spec.seed);
        for (std::uint32_t i = 0; i < spec.count; ++i)
            std::swap(population[i], population[i + rng.below(population.size() - i)]);
        population.resize(spec.count);
    } else {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> ranked;  // (degree, index)
        ranked.reserve(population.size());
        for (std::uint32_t v : population) {
            const std::uint32_t d = spec.strategy == AttackStrategy::TargetedInterDegree
                                        ? inter_degree(system, {spec.side, v})
                                        : system.graph(spec.side).degree(v);
            ranked.emplace_back(d, v);
        }
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        population.clear();
        for (std::uint32_t i = 0; i < spec.count; ++i) population.push_back(ranked[i].second);
    }

    for (std::uint32_t v : population) out.push_back({spec.side, v});
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace interdep
