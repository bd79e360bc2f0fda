// Command-line front end: topology generation and coupling, attack
// selection, single cascades and multi-seed sweeps.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "interdep/attacks.hpp"
#include "interdep/cascade.hpp"
#include "interdep/io.hpp"
#include "interdep/sweep.hpp"
#include "interdep/topogen.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace interdep;

namespace {

// Enum-valued option listing its names in the help text, with the current
// value of `target` shown as the default.
template <class T>
CLI::Option* enum_option(CLI::App* app, const std::string& flag, T& target, const std::map<std::string, T>& names) {
    std::string keys, current;
    for (const auto& [name, value] : names) {
        keys += (keys.empty() ? "" : ",") + name;
        if (value == target) current = name;
    }
    CLI::Transformer t(names, CLI::ignore_case);
    t.description("{" + keys + "}");
    return app->add_option(flag, target)->transform(t)->default_str(current);
}

// Options that must be given either as a flag or in the config file.
std::vector<CLI::Option*> required_options;

CLI::Option* need(CLI::Option* opt) {
    required_options.push_back(opt);
    return opt->description(opt->get_description() + (opt->get_description().empty() ? "" : " ") + "(required)");
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) s = s.substr(1, s.size() - 2);
    return s;
}

// Reads key=value lines ('#' comments, [section] headers ignored) and fills
// every option of `sub` that was not given on the command line.
void apply_config(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::string line;
    for (int line_no = 1; std::getline(in, line); ++line_no) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config")
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (opt->count() > 0) continue;
        opt->add_result(trim(line.substr(eq + 1)));
        opt->run_callback();
    }
}

const std::map<std::string, ModelKind> kModels = {
    {"hint", ModelKind::Hint}, {"sc", ModelKind::SmallClusters}, {"uniform", ModelKind::Uniform}};
const std::map<std::string, CouplingScheme> kSchemes = {{"random", CouplingScheme::RandomHint},
                                                        {"geographic", CouplingScheme::GeographicHint},
                                                        {"kn", CouplingScheme::KN}};
const std::map<std::string, AttackStrategy> kStrategies = {
    {"random", AttackStrategy::RandomUniform},
    {"inter-degree", AttackStrategy::TargetedInterDegree},
    {"intra-degree", AttackStrategy::TargetedIntraDegree},
    {"explicit", AttackStrategy::Explicit}};
const std::map<std::string, Side> kSides = {{"power", Side::Power}, {"comm", Side::Comm}};
const std::map<std::string, FractionBase> kBases = {{"total", FractionBase::TotalNodes},
                                                    {"side", FractionBase::AttackSide}};

struct RoleOpt {
    std::string name;
    std::optional<Role> get() const {
        if (name.empty()) return std::nullopt;
        auto r = parse_role(name);
        if (!r) throw std::invalid_argument("unknown role '" + name + "'");
        return r;
    }
};

void add_power_options(CLI::App* app, PowerGenParams& p) {
    app->add_option("--power-nodes", p.n_nodes, "Power network size")->capture_default_str();
    app->add_option("--subnets", p.n_subnets, "Number of power subnets")->capture_default_str();
    app->add_option("--avg-degree", p.target_avg_degree, "Target average degree")->capture_default_str();
    app->add_option("--rewire-p", p.rewire_p, "Lattice rewiring probability")->capture_default_str();
    app->add_option("--generators", p.role_counts.generators)->capture_default_str();
    app->add_option("--transmission", p.role_counts.transmission)->capture_default_str();
    app->add_option("--distribution", p.role_counts.distribution)->capture_default_str();
}

void add_comm_options(CLI::App* app, CommGenParams& c) {
    app->add_option("--comm-nodes", c.n_nodes, "Communications network size")->capture_default_str();
    app->add_option("--ba-m", c.m, "Preferential attachment edges per node")->capture_default_str();
}

void add_box_options(CLI::App* app, BoundingBox& b) {
    app->add_option("--box-width", b.x_max, "Coordinate box width (km)")->capture_default_str();
    app->add_option("--box-height", b.y_max, "Coordinate box height (km)")->capture_default_str();
}

Network extract(const InterSystem& s, Side side) {
    Network n;
    n.graph = s.graph(side);
    n.roles = s.roles(side);
    n.coords = s.coords(side);
    return n;
}

void print_warnings(const LoadedTopology& t) {
    for (const auto& w : t.warnings) std::cerr << "warning: " << w << '\n';
}

std::string summary(const InterSystem& system, const ModelSpec& model, const CascadeReport& r) {
    std::ostringstream out;
    out << "model " << describe(model) << '\n'
        << "attacked " << r.initial_attack.size() << '\n'
        << "failed " << r.failed_total() << '/' << system.total_nodes() << '\n'
        << "failed_power " << r.failed(Side::Power) << '/' << system.size(Side::Power) << '\n'
        << "failed_comm " << r.failed(Side::Comm) << '/' << system.size(Side::Comm) << '\n';
    for (Role role : {Role::Generation, Role::Transmission, Role::Distribution, Role::ControlCenter,
                      Role::Relay})
        out << "failed_" << to_string(role) << ' ' << r.failed(role) << '\n';
    out << "rounds " << r.rounds << '\n';
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cascading failure simulator for interdependent power/communications networks"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate uncoupled synthetic power and comm networks");
    PowerGenParams gen_power;
    CommGenParams gen_comm;
    BoundingBox gen_box;
    std::uint64_t gen_seed = 0;
    bool gen_coords = false;
    std::string gen_out;
    add_power_options(gen, gen_power);
    add_comm_options(gen, gen_comm);
    add_box_options(gen, gen_box);
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_flag("--coords", gen_coords, "Attach uniform random coordinates");
    need(gen->add_option("--out", gen_out, "Output directory"));

    // couple
    auto* cpl = app.add_subcommand("couple", "Add dependency arcs between the two networks");
    std::string cpl_in, cpl_out;
    CouplingSpec cpl_spec;
    need(cpl->add_option("--in", cpl_in));
    need(cpl->add_option("--out", cpl_out));
    enum_option(cpl, "--scheme", cpl_spec.scheme, kSchemes);
    cpl->add_option("--kn-k", cpl_spec.k)->capture_default_str();
    cpl->add_option("--kn-n", cpl_spec.n, "0 = smallest feasible cap")->capture_default_str();
    cpl->add_option("--seed", cpl_spec.seed)->capture_default_str();

    // attack
    auto* atk = app.add_subcommand("attack", "Select an initial failure set");
    std::string atk_in, atk_out, atk_ids;
    AttackSpec atk_spec;
    RoleOpt atk_role;
    double atk_fraction = 0.0;
    need(atk->add_option("--in", atk_in));
    atk->add_option("--out", atk_out, "Target list file (default stdout)");
    enum_option(atk, "--strategy", atk_spec.strategy, kStrategies);
    enum_option(atk, "--side", atk_spec.side, kSides);
    atk->add_option("--role", atk_role.name, "Role filter");
    auto* atk_count = atk->add_option("--count", atk_spec.count);
    atk->add_option("--fraction", atk_fraction, "Fraction of the eligible population")->excludes(atk_count);
    atk->add_option("--ids", atk_ids, "Explicit targets, e.g. power:6,comm:0");
    atk->add_option("--seed", atk_spec.seed)->capture_default_str();

    // run
    auto* run = app.add_subcommand("run", "Run one cascade and write its event log");
    std::string run_in, run_out, run_targets, run_attack_file;
    ModelSpec run_model;
    bool run_four_phase = false, run_ignore_pairs = false;
    need(run->add_option("--in", run_in));
    enum_option(run, "--model", run_model.variant, kModels);
    run->add_option("--delta", run_model.delta, "Small clusters threshold");
    run->add_option("--targets", run_targets, "Initial failures, e.g. power:6");
    run->add_option("--attack-file", run_attack_file, "Target list written by 'attack'");
    run->add_option("--out", run_out, "Directory for events.csv and summary.txt");
    run->add_flag("--four-phase", run_four_phase, "Use the phased round schedule");
    run->add_flag("--ignore-pairs", run_ignore_pairs,
                  "Uniform: compute a maximum matching even if pairs are pinned");

    // sweep
    auto* swp = app.add_subcommand("sweep", "Multi-seed attack-size sweep");
    RunConfig cfg;
    cfg.generate.emplace();
    std::string swp_dir, swp_out, swp_fractions, swp_counts;
    RoleOpt swp_role;
    bool swp_fixed = false, swp_serial = false;
    int swp_threads = 0;
    add_power_options(swp, cfg.generate->power);
    add_comm_options(swp, cfg.generate->comm);
    add_box_options(swp, cfg.generate->box);
    swp->add_option("--topology-dir", swp_dir, "Load topology instead of generating");
    swp->add_flag("--fixed-topology", swp_fixed, "Generate one topology for all seeds");
    enum_option(swp, "--coupling", cfg.coupling.scheme, kSchemes);
    swp->add_option("--kn-k", cfg.coupling.k)->capture_default_str();
    swp->add_option("--kn-n", cfg.coupling.n)->capture_default_str();
    enum_option(swp, "--model", cfg.model.variant, kModels);
    swp->add_option("--delta", cfg.model.delta);
    enum_option(swp, "--strategy", cfg.attack.strategy, kStrategies);
    enum_option(swp, "--side", cfg.attack.side, kSides);
    swp->add_option("--role", swp_role.name, "Role filter for attacked nodes");
    swp->add_option("--fractions", swp_fractions, "Comma-separated attack fractions");
    swp->add_option("--counts", swp_counts, "Comma-separated attack counts");
    enum_option(swp, "--fraction-base", cfg.fraction_base, kBases);
    swp->add_option("--seeds", cfg.n_seeds)->capture_default_str();
    swp->add_option("--base-seed", cfg.base_seed)->capture_default_str();
    swp->add_flag("--skip-control-attacked", cfg.skip_control_attacked,
                  "Drop cells whose attack hits a control center");
    need(swp->add_option("--out", swp_out, "Output directory for sweep.csv"));
    swp->add_option("--threads", swp_threads, "OpenMP threads (0 = runtime default)");
    swp->add_flag("--serial", swp_serial, "Use the single-threaded reference path");

    // stats
    auto* sts = app.add_subcommand("stats", "Recompute aggregates from a sweep CSV");
    std::string sts_in;
    need(sts->add_option("--in", sts_in));

    // validate
    auto* val = app.add_subcommand("validate", "Check a topology directory");
    std::string val_in, val_model;
    need(val->add_option("--in", val_in));
    val->add_option("--model", val_model, "Also check model requirements (hint, sc, uniform)");

    std::map<CLI::App*, std::string> config_files;
    for (auto* sub : app.get_subcommands([](CLI::App*) { return true; }))
        sub->add_option("--config", config_files[sub], "key=value config file; explicit flags win");

    CLI11_PARSE(app, argc, argv);

    for (auto& [sub, file] : config_files) {
        if (!sub->parsed()) continue;
        try {
            if (!file.empty()) apply_config(sub, file);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        }
        for (const CLI::Option* opt : required_options)
            if (sub->get_option_no_throw(opt->get_name()) == opt && opt->count() == 0) {
                std::cerr << opt->get_name() << " is required\n" << "Run with --help for more information.\n";
                return 2;
            }
    }

    try {
        if (gen->parsed()) {
            PowerGenParams pp = gen_power;
            pp.seed = gen_seed;
            CommGenParams cp = gen_comm;
            cp.seed = gen_seed + 1;
            Network p = generate_power(pp);
            Network c = generate_comm(cp);
            if (gen_coords) {
                p.coords = assign_coordinates(p.graph, gen_box, gen_seed + 2);
                c.coords = assign_coordinates(c.graph, gen_box, gen_seed + 3);
            }
            const InterSystem s(p.graph, p.roles, c.graph, c.roles, {}, {}, {}, std::nullopt, p.coords,
                                c.coords);
            save_topology(s, gen_out);
            std::cout << "wrote " << s.size(Side::Power) << " power + " << s.size(Side::Comm)
                      << " comm nodes to " << gen_out << '\n';
        } else if (cpl->parsed()) {
            const auto loaded = load_topology(cpl_in);
            print_warnings(loaded);
            const InterSystem s = couple(extract(loaded.system, Side::Power),
                                         extract(loaded.system, Side::Comm), cpl_spec);
            save_topology(s, cpl_out);
            std::cout << "ctrl " << s.a_ctrl().size() << " energy " << s.a_energy().size() << " info "
                      << s.a_info().size() << '\n';
        } else if (atk->parsed()) {
            const auto loaded = load_topology(atk_in);
            print_warnings(loaded);
            atk_spec.role = atk_role.get();
            atk_spec.ids = parse_node_list(atk_ids);
            if (atk_fraction > 0.0) {
                const auto pop = eligible_population(loaded.system, atk_spec.side, atk_spec.role).size();
                atk_spec.count = static_cast<std::uint32_t>(std::llround(atk_fraction * pop));
            }
            const auto targets = select_targets(loaded.system, atk_spec);
            if (atk_out.empty()) {
                write_targets_csv(std::cout, targets);
            } else {
                std::ofstream out(atk_out);
                write_targets_csv(out, targets);
            }
        } else if (run->parsed()) {
            auto loaded = load_topology(run_in);
            print_warnings(loaded);
            InterSystem system = std::move(loaded.system);
            if (run_ignore_pairs && system.e_dep()) {
                system = InterSystem(system.power_graph(), system.roles(Side::Power), system.comm_graph(),
                                     system.roles(Side::Comm), system.a_ctrl(), system.a_energy(),
                                     system.a_info(), std::nullopt, system.coords(Side::Power),
                                     system.coords(Side::Comm));
            }
            std::vector<NodeId> initial = parse_node_list(run_targets);
            if (!run_attack_file.empty()) {
                auto more = read_targets_csv(run_attack_file);
                initial.insert(initial.end(), more.begin(), more.end());
            }
            const CascadeReport report =
                run_cascade(system, run_model, initial,
                            {run_four_phase ? Schedule::FourPhase : Schedule::WholeSweep});
            const std::string text = summary(system, run_model, report);
            if (!run_out.empty()) {
                std::filesystem::create_directories(run_out);
                std::ofstream ev(std::filesystem::path(run_out) / "events.csv", std::ios::binary);
                write_events_csv(ev, system, report);
                std::ofstream sm(std::filesystem::path(run_out) / "summary.txt", std::ios::binary);
                sm << text;
            }
            std::cout << text;
        } else if (swp->parsed()) {
            if (!swp_dir.empty()) {
                cfg.generate.reset();
                cfg.topology_dir = swp_dir;
            }
            cfg.regenerate_per_seed = !swp_fixed;
            cfg.attack.role = swp_role.get();
            if (!swp_fractions.empty())
                for (const auto& f : CLI::detail::split(swp_fractions, ',')) cfg.fractions.push_back(std::stod(f));
            if (!swp_counts.empty())
                for (const auto& c : CLI::detail::split(swp_counts, ','))
                    cfg.counts.push_back(static_cast<std::uint32_t>(std::stoul(c)));
#ifdef _OPENMP
            if (swp_threads > 0) omp_set_num_threads(swp_threads);
#endif
            const SweepResult result = swp_serial ? run_sweep_serial(cfg) : run_sweep(cfg);
            if (!aggregates_reconcile(result.rows, result.aggregates))
                throw std::runtime_error("aggregate rows do not reconcile with raw rows");
            std::filesystem::create_directories(swp_out);
            std::ofstream out(std::filesystem::path(swp_out) / "sweep.csv", std::ios::binary);
            write_sweep_csv(out, result);
            std::cout << "wrote " << result.rows.size() << " rows to "
                      << (std::filesystem::path(swp_out) / "sweep.csv").string() << '\n';
        } else if (sts->parsed()) {
            const ParsedSweep parsed = read_sweep_csv(sts_in);
            const auto fresh = stats(parsed.rows);
            std::cout << "attack_size,samples,mean_failed_total,std_failed_total,mean_rounds\n";
            for (const Aggregate& a : fresh) {
                std::cout << a.attack_size << ',' << a.samples << ',' << format_double(a.mean[2]) << ','
                          << format_double(a.stddev[2]) << ',' << format_double(a.mean[3])
                          << (a.single_sample ? ",single-sample" : "") << '\n';
            }
            if (!parsed.aggregates.empty() && !aggregates_reconcile(parsed.rows, parsed.aggregates, 1e-6)) {
                std::cerr << "stored aggregates do not match the raw rows\n";
                return 1;
            }
        } else if (val->parsed()) {
            const auto loaded = load_topology(val_in);
            print_warnings(loaded);
            std::vector<std::string> problems;
            if (val_model.empty()) {
                problems = validate_system(loaded.system);
            } else {
                const auto kind = parse_model(val_model);
                if (!kind) throw std::invalid_argument("unknown model '" + val_model + "'");
                ModelSpec m;
                m.variant = *kind;
                if (*kind == ModelKind::SmallClusters) m.delta = 1;
                problems = validate_for_model(loaded.system, m);
            }
            for (const auto& p : problems) std::cout << p << '\n';
            if (!problems.empty()) return 1;
            std::cout << "ok: " << loaded.system.size(Side::Power) << " power, "
                      << loaded.system.size(Side::Comm) << " comm nodes\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
