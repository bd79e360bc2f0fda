#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "interdep/net_core.hpp"

namespace interdep {

enum class ModelKind : std::uint8_t { Uniform, SmallClusters, Hint };

struct ModelSpec {
    ModelKind variant = ModelKind::Hint;
    std::uint32_t delta = 0;  // SmallClusters only
    // k-n coupling parameters; informational, the failure rule ignores them.
    std::optional<std::uint32_t> k;
    std::optional<std::uint32_t> n;

    static ModelSpec uniform() { return make(ModelKind::Uniform); }
    static ModelSpec small_clusters(std::uint32_t delta) {
        ModelSpec m = make(ModelKind::SmallClusters);
        m.delta = delta;
        return m;
    }
    static ModelSpec hint() { return make(ModelKind::Hint); }

private:
    static ModelSpec make(ModelKind kind) {
        ModelSpec m;
        m.variant = kind;
        return m;
    }
};

const char* to_string(ModelKind m);
std::optional<ModelKind> parse_model(std::string_view s);
std::string describe(const ModelSpec& m);

enum class FailureReason : std::uint8_t {
    NotInGiantComponent,
    DependencyPartnerFailed,
    Unmatched,
    ComponentBelowDelta,
    NoAliveInterlink,
    NoPowerSupplier,
    AllControlCentersFailed,
    AllAccessRelaysFailed,
    NoControlPath,
    NoPathToGenerator,
    InitialAttack,
};

const char* to_string(FailureReason r);
std::optional<FailureReason> parse_reason(std::string_view s);

struct FailureEvent {
    NodeId node;
    FailureReason reason;
    friend bool operator==(const FailureEvent&, const FailureEvent&) = default;
};

/// Restricts an evaluator to one of the four sub-sweeps of the phased
/// schedule: intra-network conditions (connectivity inside a node's own
/// network) or inter-network conditions (dependencies on the other one).
enum class Phase : std::uint8_t { All, PowerIntra, PowerInter, CommIntra, CommInter };

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One-to-one Power <-> Comm pairing used by the Uniform model.
struct UniformView {
    std::vector<std::uint32_t> power_partner;  // kUnpaired when uncovered
    std::vector<std::uint32_t> comm_partner;
    std::vector<NodeId> unmatched;

    static constexpr std::uint32_t kUnpaired = 0xFFFFFFFFu;
    std::size_t pairs() const;
};

/// Maximum-cardinality matching over the union of all dependency arcs with
/// direction erased. Augmenting paths are searched from power nodes in
/// ascending index order, trying comm neighbours in ascending order.
UniformView build_uniform_view(const InterSystem& system);

/// View taken verbatim from the system's explicit e_dep pairs. Throws
/// ModelError when the system carries none.
UniformView uniform_view_from_pairs(const InterSystem& system);

// Evaluators return newly failing alive nodes, power side first, each side in
// ascending index order. Each node carries the first matching reason.
std::vector<FailureEvent> evaluate_uniform(const InterSystem& system, const UniformView& view,
                                           const AliveSet& alive, Phase phase = Phase::All);
std::vector<FailureEvent> evaluate_sc(const InterSystem& system, const AliveSet& alive,
                                      std::uint32_t delta, Phase phase = Phase::All);
std::vector<FailureEvent> evaluate_hint(const InterSystem& system, const AliveSet& alive,
                                        Phase phase = Phase::All);

/// Structural violations plus the model-specific requirements (a HINT power
/// node needs at least one ctrl and one info arc; SC needs delta >= 1).
std::vector<std::string> validate_for_model(const InterSystem& system, const ModelSpec& model);

/// Binds a model to a system: validates once, prepares the Uniform pairing
/// (explicit e_dep pairs when present, maximum matching otherwise) and
/// dispatches to the matching evaluator.
class FailureModel {
public:
    FailureModel(const InterSystem& system, ModelSpec spec);

    std::vector<FailureEvent> evaluate(const AliveSet& alive, Phase phase = Phase::All) const;

    const ModelSpec& spec() const { return spec_; }
    const InterSystem& system() const { return *system_; }
    const std::optional<UniformView>& view() const { return view_; }

private:
    const InterSystem* system_;
    ModelSpec spec_;
    std::optional<UniformView> view_;
};

}  // namespace interdep
