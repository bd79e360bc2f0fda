#include "interdep/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "interdep/cascade.hpp"
#include "interdep/io.hpp"
#include "interdep/random.hpp"

namespace interdep {

namespace {

enum Stream : std::uint64_t {
    kPowerStream = 10,
    kCommStream,
    kCouplingStream,
    kPowerCoordStream,
    kCommCoordStream,
    kAttackStream = 1000,
};

std::uint64_t seed_for(const RunConfig& c, std::uint32_t i) { return c.base_seed + i; }

}  // namespace

void check_config(const RunConfig& c) {
    if (c.generate.has_value() == c.topology_dir.has_value())
        throw std::invalid_argument("exactly one topology source (generate or load) is required");
    if (c.n_seeds < 1) throw std::invalid_argument("n_seeds must be >= 1");
    if (c.fractions.empty() == c.counts.empty())
        throw std::invalid_argument("give either attack fractions or attack counts");
    for (double f : c.fractions)
        if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("attack fractions must lie in (0,1]");
    if (c.attack.strategy == AttackStrategy::Explicit)
        throw std::invalid_argument("sweeps need a random or targeted attack strategy");
    if (c.model.variant == ModelKind::SmallClusters && c.model.delta < 1)
        throw std::invalid_argument("small clusters threshold must be at least 1");
}

InterSystem build_system(const RunConfig& c, std::uint32_t seed_index) {
    if (c.topology_dir) return load_topology(*c.topology_dir).system;
    const std::uint64_t seed = seed_for(c, c.regenerate_per_seed ? seed_index : 0);
    PowerGenParams pp = c.generate->power;
    pp.seed = derive_seed(seed, kPowerStream);
    CommGenParams cp = c.generate->comm;
    cp.seed = derive_seed(seed, kCommStream);
    Network p = generate_power(pp);
    Network q = generate_comm(cp);
    if (c.coupling.scheme == CouplingScheme::GeographicHint) {
        p.coords = assign_coordinates(p.graph, c.generate->box, derive_seed(seed, kPowerCoordStream));
        q.coords = assign_coordinates(q.graph, c.generate->box, derive_seed(seed, kCommCoordStream));
    }
    CouplingSpec cs = c.coupling;
    cs.seed = derive_seed(seed, kCouplingStream);
    return couple(p, q, cs);
}

std::vector<std::uint32_t> attack_sizes(const RunConfig& c, const InterSystem& system) {
    std::vector<std::uint32_t> out;
    auto push = [&](std::uint32_t n) {
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    };
    for (std::uint32_t n : c.counts) push(n);
    const double base = c.fraction_base == FractionBase::TotalNodes ? system.total_nodes()
                                                                   : system.size(c.attack.side);
    for (double f : c.fractions) push(static_cast<std::uint32_t>(std::llround(f * base)));
    return out;
}

namespace {

// Runs every attack size for one seed. `sink(k, row)` receives the row for the
// k-th size, or nothing when the cell is skipped.
template <class Sink>
void run_seed(const RunConfig& c, const InterSystem& system, const std::vector<std::uint32_t>& sizes,
              std::uint32_t seed_index, Sink&& sink) {
    const FailureModel model(system, c.model);
    const std::uint64_t seed = seed_for(c, seed_index);
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        AttackSpec spec = c.attack;
        spec.count = sizes[k];
        spec.seed = derive_seed(seed, kAttackStream + sizes[k]);
        const auto targets = select_targets(system, spec);
        if (c.skip_control_attacked &&
            std::any_of(targets.begin(), targets.end(),
                        [&](const NodeId& n) { return system.role(n) == Role::ControlCenter; })) {
            sink(k, std::nullopt);
            continue;
        }
        const CascadeReport report = run_cascade(model, targets);
        SweepRow row;
        row.attack_size = sizes[k];
        row.seed = seed;
        row.failed_power = report.failed(Side::Power);
        row.failed_comm = report.failed(Side::Comm);
        row.failed_total = report.failed_total();
        row.rounds = report.rounds;
        row.total_nodes = system.total_nodes();
        sink(k, std::optional<SweepRow>(row));
    }
}

SweepResult collect(const std::vector<std::vector<std::optional<SweepRow>>>& grid) {
    SweepResult out;
    for (const auto& by_seed : grid)
        for (const auto& cell : by_seed)
            if (cell) out.rows.push_back(*cell);
    if (!out.rows.empty()) out.aggregates = stats(out.rows);
    return out;
}

}  // namespace

SweepResult run_sweep_serial(const RunConfig& c) {
    check_config(c);
    std::unique_ptr<InterSystem> shared;
    if (c.topology_dir || !c.regenerate_per_seed) shared = std::make_unique<InterSystem>(build_system(c, 0));

    std::vector<std::vector<std::optional<SweepRow>>> grid;
    for (std::uint32_t i = 0; i < c.n_seeds; ++i) {
        const InterSystem system = shared ? *shared : build_system(c, i);
        const auto sizes = attack_sizes(c, system);
        if (grid.empty()) grid.assign(sizes.size(), std::vector<std::optional<SweepRow>>(c.n_seeds));
        run_seed(c, system, sizes, i, [&](std::size_t k, std::optional<SweepRow> row) { grid[k][i] = row; });
    }
    return collect(grid);
}

SweepResult run_sweep(const RunConfig& c) {
    check_config(c);
    std::unique_ptr<InterSystem> shared;
    if (c.topology_dir || !c.regenerate_per_seed) shared = std::make_unique<InterSystem>(build_system(c, 0));

    // Every generated system has the same node counts, so seed 0 fixes the
    // attack sizes for the whole grid.
    const std::size_t n_sizes = attack_sizes(c, shared ? *shared : build_system(c, 0)).size();
    std::vector<std::vector<std::optional<SweepRow>>> grid(
        n_sizes, std::vector<std::optional<SweepRow>>(c.n_seeds));

    std::string error;
    const auto n_seeds = static_cast<std::int64_t>(c.n_seeds);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n_seeds; ++i) {
        try {
            const auto idx = static_cast<std::uint32_t>(i);
            const InterSystem local = shared ? InterSystem{} : build_system(c, idx);
            const InterSystem& system = shared ? *shared : local;
            const auto sizes = attack_sizes(c, system);
            run_seed(c, system, sizes, idx,
                     [&](std::size_t k, std::optional<SweepRow> row) { grid[k][idx] = row; });
        } catch (const std::exception& e) {
#pragma omp critical(sweep_error)
            if (error.empty()) error = e.what();
        }
    }
    if (!error.empty()) throw std::runtime_error(error);
    return collect(grid);
}

std::vector<Aggregate> stats(const std::vector<SweepRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("cannot aggregate an empty group");
    std::vector<Aggregate> out;
    std::map<std::uint32_t, std::vector<const SweepRow*>> groups;
    for (const SweepRow& r : rows) {
        auto& g = groups[r.attack_size];
        if (g.empty()) out.push_back(Aggregate{r.attack_size});
        g.push_back(&r);
    }
    for (Aggregate& a : out) {
        const auto& g = groups[a.attack_size];
        a.samples = g.size();
        a.single_sample = g.size() == 1;
        for (int col = 0; col < 4; ++col) {
            auto value = [col](const SweepRow* r) -> double {
                switch (col) {
                    case 0: return r->failed_power;
                    case 1: return r->failed_comm;
                    case 2: return r->failed_total;
                    default: return r->rounds;
                }
            };
            double sum = 0.0;
            for (const SweepRow* r : g) sum += value(r);
            const double mean = sum / static_cast<double>(g.size());
            double ss = 0.0;
            for (const SweepRow* r : g) ss += (value(r) - mean) * (value(r) - mean);
            a.mean[col] = mean;
            a.stddev[col] = g.size() > 1 ? std::sqrt(ss / static_cast<double>(g.size() - 1)) : 0.0;
        }
    }
    return out;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "attack_size,seed,failed_power,failed_comm,failed_total,rounds\n";
    for (const SweepRow& r : result.rows)
        out << r.attack_size << ',' << r.seed << ',' << r.failed_power << ',' << r.failed_comm << ','
            << r.failed_total << ',' << r.rounds << '\n';
    for (const Aggregate& a : result.aggregates) {
        out << a.attack_size << ",MEAN";
        for (double v : a.mean) out << ',' << format_double(v);
        out << '\n' << a.attack_size << ",STD";
        for (double v : a.stddev) out << ',' << format_double(v);
        out << '\n';
    }
}

ParsedSweep read_sweep_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error(file.string() + ": cannot open");
    ParsedSweep out;
    std::map<std::uint32_t, std::size_t> agg_index;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#' || line.rfind("attack_size", 0) == 0) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        const std::string where = file.filename().string() + ":" + std::to_string(line_no) + ": ";
        if (f.size() != 6) throw std::runtime_error(where + "expected 6 columns");
        try {
            const auto size = static_cast<std::uint32_t>(std::stoul(f[0]));
            if (f[1] == "MEAN" || f[1] == "STD") {
                auto [it, fresh] = agg_index.emplace(size, out.aggregates.size());
                if (fresh) out.aggregates.push_back(Aggregate{size});
                auto& target = f[1] == "MEAN" ? out.aggregates[it->second].mean
                                              : out.aggregates[it->second].stddev;
                for (int c = 0; c < 4; ++c) target[c] = std::stod(f[2 + c]);
                continue;
            }
            SweepRow r;
            r.attack_size = size;
            r.seed = std::stoull(f[1]);
            r.failed_power = static_cast<std::uint32_t>(std::stoul(f[2]));
            r.failed_comm = static_cast<std::uint32_t>(std::stoul(f[3]));
            r.failed_total = static_cast<std::uint32_t>(std::stoul(f[4]));
            r.rounds = static_cast<std::uint32_t>(std::stoul(f[5]));
            out.rows.push_back(r);
        } catch (const std::logic_error&) {
            throw std::runtime_error(where + "malformed number");
        }
    }
    return out;
}

bool aggregates_reconcile(const std::vector<SweepRow>& rows, const std::vector<Aggregate>& stored,
                          double tolerance) {
    if (rows.empty()) return stored.empty();
    const auto fresh = stats(rows);
    if (fresh.size() != stored.size()) return false;
    for (std::size_t i = 0; i < fresh.size(); ++i) {
        if (fresh[i].attack_size != stored[i].attack_size) return false;
        for (int c = 0; c < 4; ++c) {
            if (std::abs(fresh[i].mean[c] - stored[i].mean[c]) > tolerance) return false;
            if (std::abs(fresh[i].stddev[c] - stored[i].stddev[c]) > tolerance) return false;
        }
    }
    return true;
}

}  // namespace interdep
