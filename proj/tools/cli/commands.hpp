#pragma once

#include <cstddef>
#include <vector>

#include "cli/config.hpp"

namespace cgcli {

// Thread count from CG_THREADS, else hardware concurrency.
int threads_from_env();

struct FluctRow {
    std::size_t n = 0;
    double gamma = 0, sigma = 0;
    double s = 0;
    long long k = 0;
    double cdf = 0, tw = 0;
};

struct TailRow {
    double s = 0;
    long long k = 0;
    double prob = 0;
    std::size_t exceedances = 0;
    double x = 0; // n min(s^{3/2}, s)
    bool used = false;
};

struct FluctReport {
    std::vector<FluctRow> rows;
    std::vector<std::size_t> ns;
    std::vector<double> sup_distance;
    bool monotone = true;
    std::vector<TailRow> tail;
    double tail_slope = 0, tail_intercept = 0, tail_r2 = 0;
    std::size_t tail_points = 0;
};

// Pure computation behind `fluct`, no files.
FluctReport fluct_report(const cg::ModelSpec& model, const FluctCfg& cfg, int threads);

// Each writes its files into cfg.output.dir and returns a JSON summary.
json run_simulate(const RunConfig& cfg, int threads);
json run_shape(const RunConfig& cfg, int threads);
json run_dist(const RunConfig& cfg, int threads);
json run_fluct(const RunConfig& cfg, int threads);
json run_tw(const RunConfig& cfg, int threads);
json run_trace(const RunConfig& cfg, int threads);

// Creates the output directory, writes resolved_config.json, dispatches, and
// writes summary.json when requested.
json run(const RunConfig& cfg, int threads);

} // namespace cgcli
