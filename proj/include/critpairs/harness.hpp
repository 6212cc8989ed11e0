#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "critpairs/diagnostics.hpp"
#include "critpairs/fluctuations.hpp"
#include "critpairs/pairing.hpp"

namespace critpairs {

enum class OutputFormat { kCsv, kJsonl };

// Diagnostics parameter overrides; values <= 0 fall back to the presets.
struct DiagnosticsOverrides {
    double delta = -1.0;
    double c_n = -1.0;
    double ell_n = -1.0;
    long long net_budget = -1;

    bool operator==(const DiagnosticsOverrides&) const = default;
};

struct ExperimentConfig {
    double alpha = 1.0;
    std::vector<std::size_t> n_values;
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    std::size_t top_l = 8;
    DiagnosticsOverrides parameters;
    std::string outputs = ".";
    std::set<std::string> emit = {"pairing", "fluctuations"};
    OutputFormat format = OutputFormat::kCsv;

    void validate() const;
    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);

    bool operator==(const ExperimentConfig&) const = default;
};

// Per-(alpha, n) summary; everything here is recomputable from the raw rows.
struct SummaryBlock {
    std::size_t n = 0;
    std::size_t trials_requested = 0;
    std::size_t trials_ok = 0;
    std::size_t solver_failures = 0;
    double order_ok_fraction = 0.0;
    double pair_dist_median = 0.0;   // median over trials of max_{i<=L} dist_first
    double pair_dist_q90 = 0.0;
    double pair_dist_max = 0.0;
    double fluct_var_re = 0.0;       // rank-1 moments over order-ok trials
    double fluct_var_im = 0.0;
    double fluct_cov_re_im = 0.0;
    double fluct_kurtosis_re = 0.0;
    double event_freq[6] = {0, 0, 0, 0, 0, 0};  // e, f, f*, f||, g, h
    std::size_t certified_count = 0;
    double max_residual = 0.0;
    double max_sum_error = 0.0;
    double max_hull_excess = 0.0;
    double max_glpair_error = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<SummaryBlock> blocks;
    double wall_seconds = 0.0;
    std::size_t threads = 0;

    std::string to_json() const;
};

// Pool size: CRITPAIRS_THREADS when set, hardware concurrency otherwise.
std::size_t thread_pool_size();

// Work-stealing parallel loop; fn(i) must only touch slot i of its outputs,
// which keeps results independent of the schedule.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Shared row formatting (also used by the CLI): 17 significant digits, the
// shortest round-trippable form.
std::string format_double(double v);

} // namespace critpairs
