// Benchmark: batched OpenMP forward/backward kernels against the serial
// reference scorer on a synthetic network.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hidam/forward.hpp"
#include "hidam/reference.hpp"
#include "hidam/synthgen.hpp"

using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int main(int argc, char** argv) {
    std::size_t companies = 2000;
    std::size_t batch = 512;
    int reps = 3;
    if (argc > 1) companies = static_cast<std::size_t>(std::stoul(argv[1]));
    if (argc > 2) batch = static_cast<std::size_t>(std::stoul(argv[2]));
    if (argc > 3) reps = std::stoi(argv[3]);

    hidam::SynthConfig scfg;
    scfg.companies = companies;
    scfg.persons = companies / 3 + 1;
    scfg.industries = companies / 150 + 2;
    scfg.gamma_equity = 1.0;
    scfg.seed = 7;
    const hidam::SynthDataset ds = hidam::generate(scfg);

    hidam::ModelConfig cfg;
    cfg.metapaths = ds.metapaths;
    std::vector<std::uint32_t> all_rows;
    for (std::uint32_t r = 0; r < ds.graph.companies().count(); ++r) all_rows.push_back(r);
    const hidam::FeatureScaler scaler =
        hidam::FeatureScaler::fit(ds.graph, all_rows, cfg.imputation);
    const hidam::ModelParams params = hidam::ModelParams::init(ds.graph.schema(), cfg, 11);

    std::vector<std::uint32_t> targets;
    for (std::uint32_t r = 0; r < batch && r < all_rows.size(); ++r) targets.push_back(r);
    std::vector<std::uint8_t> labels(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        labels[i] = ds.labels.items[targets[i]].label;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif
    std::printf("companies: %zu, batch: %zu, meta-paths: %zu\n", companies, targets.size(),
                cfg.metapaths.size());

    double t_ref = 0.0, t_fwd = 0.0, t_bwd = 0.0, checksum = 0.0;
    hidam::ModelParams grads = params;
    for (int r = 0; r < reps; ++r) {
        auto t0 = Clock::now();
        const auto ref_scores =
            hidam::ref::score_batch(ds.graph, scaler, params, cfg, targets, 99);
        t_ref += seconds_since(t0);

        t0 = Clock::now();
        const hidam::ForwardTrace trace =
            hidam::forward_batch(ds.graph, scaler, params, cfg, targets, 99);
        t_fwd += seconds_since(t0);

        t0 = Clock::now();
        hidam::backward_batch(ds.graph, scaler, grads, cfg, trace, labels);
        t_bwd += seconds_since(t0);

        for (std::size_t i = 0; i < targets.size(); ++i)
            checksum += trace.scores[i] - ref_scores[i];
    }

    std::printf("serial reference forward : %8.1f ms/batch\n", 1e3 * t_ref / reps);
    std::printf("batched forward          : %8.1f ms/batch  (%.2fx)\n", 1e3 * t_fwd / reps,
                t_ref / t_fwd);
    std::printf("batched backward         : %8.1f ms/batch\n", 1e3 * t_bwd / reps);
    std::printf("score drift vs reference : %.3e\n", checksum / (reps * targets.size()));
    return 0;
}
