#include "interdep/models.hpp"

#include <algorithm>

namespace interdep {

const char* to_string(ModelKind m) {
    switch (m) {
        case ModelKind::Uniform: return "uniform";
        case ModelKind::SmallClusters: return "sc";
        case ModelKind::Hint: return "hint";
    }
    return "?";
}

std::optional<ModelKind> parse_model(std::string_view s) {
    if (s == "uniform") return ModelKind::Uniform;
    if (s == "sc" || s == "small_clusters") return ModelKind::SmallClusters;
    if (s == "hint") return ModelKind::Hint;
    return std::nullopt;
}

std::string describe(const ModelSpec& m) {
    std::string out = to_string(m.variant);
    if (m.variant == ModelKind::SmallClusters) out += "(delta=" + std::to_string(m.delta) + ")";
    return out;
}

namespace {

constexpr FailureReason kAllReasons[] = {
    FailureReason::NotInGiantComponent,     FailureReason::DependencyPartnerFailed,
    FailureReason::Unmatched,               FailureReason::ComponentBelowDelta,
    FailureReason::NoAliveInterlink,        FailureReason::NoPowerSupplier,
    FailureReason::AllControlCentersFailed, FailureReason::AllAccessRelaysFailed,
    FailureReason::NoControlPath,           FailureReason::NoPathToGenerator,
    FailureReason::InitialAttack,
};

bool wants(Phase phase, Side side, bool intra) {
    switch (phase) {
        case Phase::All: return true;
        case Phase::PowerIntra: return side == Side::Power && intra;
        case Phase::PowerInter: return side == Side::Power && !intra;
        case Phase::CommIntra: return side == Side::Comm && intra;
        case Phase::CommInter: return side == Side::Comm && !intra;
    }
    return false;
}

template <class Range>
bool any_alive(const Range& nodes, const std::vector<std::uint8_t>& flags) {
    return std::any_of(nodes.begin(), nodes.end(), [&](std::uint32_t v) { return flags[v] != 0; });
}

}  // namespace

const char* to_string(FailureReason r) {
    switch (r) {
        case FailureReason::NotInGiantComponent: return "not_in_giant_component";
        case FailureReason::DependencyPartnerFailed: return "dependency_partner_failed";
        case FailureReason::Unmatched: return "unmatched";
        case FailureReason::ComponentBelowDelta: return "component_below_delta";
        case FailureReason::NoAliveInterlink: return "no_alive_interlink";
        case FailureReason::NoPowerSupplier: return "no_power_supplier";
        case FailureReason::AllControlCentersFailed: return "all_control_centers_failed";
        case FailureReason::AllAccessRelaysFailed: return "all_access_relays_failed";
        case FailureReason::NoControlPath: return "no_control_path";
        case FailureReason::NoPathToGenerator: return "no_path_to_generator";
        case FailureReason::InitialAttack: return "initial_attack";
    }
    return "?";
}

std::optional<FailureReason> parse_reason(std::string_view s) {
    for (FailureReason r : kAllReasons)
        if (s == to_string(r)) return r;
    return std::nullopt;
}

std::size_t UniformView::pairs() const {
    return static_cast<std::size_t>(
        std::count_if(power_partner.begin(), power_partner.end(),
                      [](std::uint32_t p) { return p != kUnpaired; }));
}

namespace {

void collect_unmatched(UniformView& view) {
    view.unmatched.clear();
    for (std::uint32_t i = 0; i < view.power_partner.size(); ++i)
        if (view.power_partner[i] == UniformView::kUnpaired) view.unmatched.push_back(power(i));
    for (std::uint32_t i = 0; i < view.comm_partner.size(); ++i)
        if (view.comm_partner[i] == UniformView::kUnpaired) view.unmatched.push_back(comm(i));
}

// Kuhn's augmenting-path search. Recursion depth is bounded by the number of
// power nodes.
class Matcher {
public:
    Matcher(const std::vector<std::vector<std::uint32_t>>& adj, UniformView& view)
        : adj_(adj), view_(view), visited_(view.comm_partner.size(), 0) {}

    bool augment_from(std::uint32_t p) {
        ++stamp_;
        return try_node(p);
    }

private:
    bool try_node(std::uint32_t p) {
        for (std::uint32_t c : adj_[p]) {
            if (visited_[c] == stamp_) continue;
            visited_[c] = stamp_;
            const std::uint32_t holder = view_.comm_partner[c];
            if (holder == UniformView::kUnpaired || try_node(holder)) {
                view_.power_partner[p] = c;
                view_.comm_partner[c] = p;
                return true;
            }
        }
        return false;
    }

    const std::vector<std::vector<std::uint32_t>>& adj_;
    UniformView& view_;
    std::vector<std::uint32_t> visited_;
    std::uint32_t stamp_ = 0;
};

}  // namespace

UniformView build_uniform_view(const InterSystem& system) {
    const std::uint32_t np = system.size(Side::Power);
    const std::uint32_t nc = system.size(Side::Comm);
    std::vector<std::vector<std::uint32_t>> adj(np);
    for (std::uint32_t p = 0; p < np; ++p) {
        auto& row = adj[p];
        for (auto c : system.ctrl_of(p)) row.push_back(c);
        for (auto c : system.info_of(p)) row.push_back(c);
        for (auto c : system.supplied_by(p)) row.push_back(c);
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }

    UniformView view;
    view.power_partner.assign(np, UniformView::kUnpaired);
    view.comm_partner.assign(nc, UniformView::kUnpaired);
    Matcher matcher(adj, view);
    for (std::uint32_t p = 0; p < np; ++p) matcher.augment_from(p);
    collect_unmatched(view);
    return view;
}

UniformView uniform_view_from_pairs(const InterSystem& system) {
    if (!system.e_dep()) throw ModelError("system has no explicit dependency pairs");
    UniformView view;
    view.power_partner.assign(system.size(Side::Power), UniformView::kUnpaired);
    view.comm_partner.assign(system.size(Side::Comm), UniformView::kUnpaired);
    for (auto [p, c] : *system.e_dep()) {
        if (p >= view.power_partner.size() || c >= view.comm_partner.size())
            throw ModelError("dependency pair references a missing node");
        if (view.power_partner[p] != UniformView::kUnpaired ||
            view.comm_partner[c] != UniformView::kUnpaired)
            throw ModelError("dependency pairs are not one-to-one");
        view.power_partner[p] = c;
        view.comm_partner[c] = p;
    }
    collect_unmatched(view);
    return view;
}

std::vector<FailureEvent> evaluate_uniform(const InterSystem& system, const UniformView& view,
                                           const AliveSet& alive, Phase phase) {
    if (view.power_partner.size() != system.size(Side::Power) ||
        view.comm_partner.size() != system.size(Side::Comm))
        throw ModelError("uniform view was not derived from this system");

    std::vector<FailureEvent> out;
    for (Side side : {Side::Power, Side::Comm}) {
        const bool check_intra = wants(phase, side, true);
        const bool check_inter = wants(phase, side, false);
        if (!check_intra && !check_inter) continue;
        const Side other = side == Side::Power ? Side::Comm : Side::Power;
        const auto& flags = alive.flags(side);
        const auto& other_flags = alive.flags(other);
        const auto& partner = side == Side::Power ? view.power_partner : view.comm_partner;

        ComponentLabels labels;
        std::uint32_t gc = kNoComponent;
        if (check_intra) {
            labels = label_components(system.graph(side), flags);
            gc = giant_label(labels);
        }
        for (std::uint32_t v = 0; v < flags.size(); ++v) {
            if (!flags[v]) continue;
            const std::uint32_t mate = partner[v];
            if (check_inter && mate == UniformView::kUnpaired)
                out.push_back({{side, v}, FailureReason::Unmatched});
            else if (check_intra && labels.label[v] != gc)
                out.push_back({{side, v}, FailureReason::NotInGiantComponent});
            else if (check_inter && !other_flags[mate])
                out.push_back({{side, v}, FailureReason::DependencyPartnerFailed});
        }
    }
    return out;
}

std::vector<FailureEvent> evaluate_sc(const InterSystem& system, const AliveSet& alive,
                                      std::uint32_t delta, Phase phase) {
    if (delta < 1) throw ModelError("small clusters threshold must be at least 1");
    std::vector<FailureEvent> out;
    for (Side side : {Side::Power, Side::Comm}) {
        const bool check_intra = wants(phase, side, true);
        const bool check_inter = wants(phase, side, false);
        if (!check_intra && !check_inter) continue;
        const auto& flags = alive.flags(side);
        const auto& other_flags = alive.flags(side == Side::Power ? Side::Comm : Side::Power);

        ComponentLabels labels;
        if (check_intra) labels = label_components(system.graph(side), flags);
        for (std::uint32_t v = 0; v < flags.size(); ++v) {
            if (!flags[v]) continue;
            if (check_intra && labels.sizes[labels.label[v]] < delta) {
                out.push_back({{side, v}, FailureReason::ComponentBelowDelta});
                continue;
            }
            if (!check_inter) continue;
            // Interlinks: ctrl and energy arcs in either direction. Info arcs
            // do not exist in this model.
            const bool linked = side == Side::Power
                                    ? any_alive(system.ctrl_of(v), other_flags) ||
                                          any_alive(system.supplied_by(v), other_flags)
                                    : any_alive(system.suppliers_of(v), other_flags) ||
                                          any_alive(system.controlled_by(v), other_flags);
            if (!linked) out.push_back({{side, v}, FailureReason::NoAliveInterlink});
        }
    }
    return out;
}

std::vector<FailureEvent> evaluate_hint(const InterSystem& system, const AliveSet& alive,
                                        Phase phase) {
    std::vector<FailureEvent> out;
    const auto& pflags = alive.flags(Side::Power);
    const auto& cflags = alive.flags(Side::Comm);
    const auto& proles = system.roles(Side::Power);

    const bool power_intra = wants(phase, Side::Power, true);
    const bool power_inter = wants(phase, Side::Power, false);
    if (power_intra || power_inter) {
        ComponentLabels comm_labels;
        if (power_inter) comm_labels = label_components(system.comm_graph(), cflags);

        // Multi-source search from every operational generator; equivalent to
        // asking path(v, g) for each alive generator g.
        std::vector<std::uint8_t> powered;
        if (power_intra) {
            const Graph& g = system.power_graph();
            powered.assign(g.num_nodes(), 0);
            std::vector<std::uint32_t> stack;
            for (std::uint32_t v = 0; v < g.num_nodes(); ++v) {
                if (pflags[v] && proles[v] == Role::Generation) {
                    powered[v] = 1;
                    stack.push_back(v);
                }
            }
            while (!stack.empty()) {
                const std::uint32_t v = stack.back();
                stack.pop_back();
                for (std::uint32_t w : g.neighbors(v)) {
                    if (pflags[w] && !powered[w]) {
                        powered[w] = 1;
                        stack.push_back(w);
                    }
                }
            }
        }

        for (std::uint32_t v = 0; v < pflags.size(); ++v) {
            if (!pflags[v]) continue;
            if (power_inter) {
                const auto ctrl = system.ctrl_of(v);
                const auto info = system.info_of(v);
                if (!any_alive(ctrl, cflags)) {
                    out.push_back({power(v), FailureReason::AllControlCentersFailed});
                    continue;
                }
                if (!any_alive(info, cflags)) {
                    out.push_back({power(v), FailureReason::AllAccessRelaysFailed});
                    continue;
                }
                bool reachable = false;
                for (std::uint32_t r : info) {
                    if (!cflags[r]) continue;
                    for (std::uint32_t q : ctrl) {
                        if (cflags[q] && comm_labels.label[r] == comm_labels.label[q]) {
                            reachable = true;
                            break;
                        }
                    }
                    if (reachable) break;
                }
                if (!reachable) {
                    out.push_back({power(v), FailureReason::NoControlPath});
                    continue;
                }
            }
            if (power_intra && proles[v] != Role::Generation && !powered[v])
                out.push_back({power(v), FailureReason::NoPathToGenerator});
        }
    }

    // Comm nodes only depend on their energy suppliers; there is no
    // intra-network condition.
    if (wants(phase, Side::Comm, false)) {
        for (std::uint32_t u = 0; u < cflags.size(); ++u) {
            if (cflags[u] && !any_alive(system.suppliers_of(u), pflags))
                out.push_back({comm(u), FailureReason::NoPowerSupplier});
        }
    }
    return out;
}

std::vector<std::string> validate_for_model(const InterSystem& system, const ModelSpec& model) {
    std::vector<std::string> out = validate_system(system);
    switch (model.variant) {
        case ModelKind::Hint:
            for (std::uint32_t v = 0; v < system.size(Side::Power); ++v) {
                if (system.ctrl_of(v).empty() || system.info_of(v).empty())
                    out.push_back(describe(power(v)) +
                                  ": underspecified dependency (HINT needs ctrl and info arcs)");
            }
            break;
        case ModelKind::SmallClusters:
            if (model.delta < 1) out.push_back("small clusters threshold must be at least 1");
            break;
        case ModelKind::Uniform:
            break;
    }
    return out;
}

FailureModel::FailureModel(const InterSystem& system, ModelSpec spec)
    : system_(&system), spec_(spec) {
    const auto problems = validate_for_model(system, spec);
    if (!problems.empty()) {
        std::string msg = "invalid system for model " + describe(spec) + ":";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ModelError(msg);
    }
    if (spec.variant == ModelKind::Uniform)
        view_ = system.e_dep() ? uniform_view_from_pairs(system) : build_uniform_view(system);
}

std::vector<FailureEvent> FailureModel::evaluate(const AliveSet& alive, Phase phase) const {
    switch (spec_.variant) {
        case ModelKind::Uniform: return evaluate_uniform(*system_, *view_, alive, phase);
        case ModelKind::SmallClusters: return evaluate_sc(*system_, alive, spec_.delta, phase);
        case ModelKind::Hint: return evaluate_hint(*system_, alive, phase);
    }
    return {};
}

}  // namespace interdep
