#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "interdep/attacks.hpp"
#include "interdep/models.hpp"
#include "interdep/topogen.hpp"

namespace interdep {

struct GenerateSource {
    PowerGenParams power;
    CommGenParams comm;
    /// Synthetic coordinates are only drawn for geographic coupling.
    BoundingBox box;
};

enum class FractionBase : std::uint8_t {
    TotalNodes,  // fraction of |V_pow| + |V_com|
    AttackSide,  // fraction of the attacked side
};

struct RunConfig {
    std::optional<GenerateSource> generate;
    std::optional<std::filesystem::path> topology_dir;
    bool regenerate_per_seed = true;
    CouplingSpec coupling;
    ModelSpec model = ModelSpec::hint();
    /// Strategy, side and role filter; count and seed are set per cell.
    AttackSpec attack;
    std::vector<double> fractions;
    std::vector<std::uint32_t> counts;
    FractionBase fraction_base = FractionBase::TotalNodes;
    std::uint32_t n_seeds = 1;
    std::uint64_t base_seed = 0;
    /// Drop cells whose initial attack contains a control center.
    bool skip_control_attacked = false;
};

/// Throws std::invalid_argument describing the first broken invariant.
void check_config(const RunConfig& config);

/// One cascade system per seed: generated from seed-derived parameters or
/// loaded (and shared) from disk.
InterSystem build_system(const RunConfig& config, std::uint32_t seed_index);

struct SweepRow {
    std::uint32_t attack_size = 0;
    std::uint64_t seed = 0;
    std::uint32_t failed_power = 0;
    std::uint32_t failed_comm = 0;
    std::uint32_t failed_total = 0;
    std::uint32_t rounds = 0;
    std::uint32_t total_nodes = 0;

    double failed_fraction() const {
        return total_nodes ? static_cast<double>(failed_total) / total_nodes : 0.0;
    }
    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Mean and sample standard deviation of the four numeric columns.
struct Aggregate {
    std::uint32_t attack_size = 0;
    std::size_t samples = 0;
    std::array<double, 4> mean{};    // failed_power, failed_comm, failed_total, rounds
    std::array<double, 4> stddev{};
    /// Only one row in the group; stddev is reported as 0.
    bool single_sample = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sorted by (attack size position, seed)
    std::vector<Aggregate> aggregates;
};

/// Resolved attack sizes for a system, in configuration order, duplicates removed.
std::vector<std::uint32_t> attack_sizes(const RunConfig& config, const InterSystem& system);

/// All (size, seed) cells of a configuration. Seeds run concurrently under
/// OpenMP; rows are written into fixed slots so output order never depends
/// on scheduling.
SweepResult run_sweep(const RunConfig& config);
/// Single-threaded reference for run_sweep.
SweepResult run_sweep_serial(const RunConfig& config);

/// Groups rows by attack size (first-appearance order). Throws
/// std::invalid_argument on an empty input.
std::vector<Aggregate> stats(const std::vector<SweepRow>& rows);

/// sweep.csv: raw rows then MEAN/STD rows per attack size.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

struct ParsedSweep {
    std::vector<SweepRow> rows;
    std::vector<Aggregate> aggregates;
};
ParsedSweep read_sweep_csv(const std::filesystem::path& file);

/// True when every stored aggregate matches one recomputed from the rows.
bool aggregates_reconcile(const std::vector<SweepRow>& rows, const std::vector<Aggregate>& stored,
                          double tolerance = 1e-9);

}  // namespace interdep
