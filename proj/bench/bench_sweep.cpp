// Times the OpenMP sweep against the serial reference on the synthetic
// 1000+1000 ensemble and checks that both produce identical rows.
//
//   bench_sweep [seeds] [threads...]

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "interdep/cascade.hpp"
#include "interdep/sweep.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace interdep;

namespace {

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    cfg.generate.emplace();
    cfg.model = ModelSpec::hint();
    cfg.fractions = {0.005, 0.01, 0.025};
    cfg.n_seeds = argc > 1 ? static_cast<std::uint32_t>(std::atoi(argv[1])) : 8;

    SweepResult serial;
    const double t_serial = seconds([&] { serial = run_sweep_serial(cfg); });
    std::cout << "serial           " << t_serial << " s  (" << serial.rows.size() << " cells)\n";

    std::vector<int> threads;
    for (int i = 2; i < argc; ++i) threads.push_back(std::atoi(argv[i]));
#ifdef _OPENMP
    if (threads.empty()) threads = {1};
    if (threads.size() == 1 && argc <= 2 && omp_get_max_threads() > 1) threads.push_back(omp_get_max_threads());
#else
    if (threads.empty()) threads = {1};
#endif

    int status = 0;
    for (int t : threads) {
#ifdef _OPENMP
        omp_set_num_threads(t);
#endif
        SweepResult parallel;
        const double dt = seconds([&] { parallel = run_sweep(cfg); });
        const bool same = parallel.rows == serial.rows;
        std::cout << "openmp threads=" << t << "  " << dt << " s  speedup " << t_serial / dt
                  << (same ? "  rows identical" : "  ROWS DIFFER") << '\n';
        if (!same) status = 1;
    }

    // Single-cascade latency at full size.
    const InterSystem system = build_system(cfg, 0);
    AttackSpec attack;
    attack.count = 50;
    attack.seed = 7;
    const auto targets = select_targets(system, attack);
    CascadeReport report;
    const double t_one = seconds([&] { report = run_cascade(system, ModelSpec::hint(), targets); });
    std::cout << "single HINT cascade (" << system.total_nodes() << " nodes, " << report.rounds
              << " rounds): " << t_one << " s\n";
    return status;
}
