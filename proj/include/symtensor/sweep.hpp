#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "symtensor/bounds.hpp"

namespace symtensor {

/// Configuration of the shift-parameter experiment: plant
/// lambda * e1^(x)m, add random sparse noise scaled to a beta_hat
/// target, then for every shift in alpha_grid run the solver from
/// starts_per_alpha fresh random starts and score alignment with the
/// planted direction.
struct SweepConfig {
    int dim = 100;
    int modes = 4;
    int nnz_draws = 500;
    double beta_hat_target = 0.03;  // 0 disables the noise term
    double lambda = 1.0;
    std::vector<double> alpha_grid;  // empty -> default_alpha_grid()
    int starts_per_alpha = 10;
    double success_threshold = 0.9;  // success: converged and |a.x| above this
    std::uint64_t master_seed = 0;
    int noise_redraws = 1;  // independent noise draws to average over
    double tol = 1e-10;
    int max_iters = 1000;
    int threads = 1;
};

/// -1 to 5 in steps of 0.1.
std::vector<double> default_alpha_grid();

struct SweepRecord {
    double alpha = 0.0;
    int trial = 0;
    int noise_draw = 0;
    double final_lambda = 0.0;
    double a_dot_x = 0.0;  // signed alignment with the planted direction
    int iterations = 0;
    bool converged = false;
    bool success = false;
};

struct AlphaSummary {
    double alpha = 0.0;
    double success_rate = 0.0;
    int runs = 0;
};

struct SweepSummary {
    std::vector<AlphaSummary> per_alpha;
    double threshold_principal = 0.0;  // worst-case stability shift
    double threshold_spurious = 0.0;   // spurious stability envelope
    double threshold_even_mode = 0.0;  // NaN when modes is odd
};

struct SweepResult {
    std::vector<SweepRecord> records;
    SweepSummary summary;
};

/// Deterministic for a fixed config: per-trial seeds are derived from
/// (master_seed, noise_draw, alpha index, trial), so the records do not
/// depend on thread count or execution order. Per-trial solver failures
/// are recorded as unconverged rows; they never abort the sweep.
SweepResult run_sweep(const SweepConfig& config);

/// CSV schema:
/// alpha,trial,noise_draw,final_lambda,a_dot_x,iterations,converged,success
/// Reals carry 17 significant digits; rows are LF-terminated.
void write_records_csv(const std::vector<SweepRecord>& records, std::ostream& out);
void write_records_csv_file(const std::vector<SweepRecord>& records,
                            const std::string& path);

/// Self-contained SVG: success rate vs shift, with vertical markers at
/// the computed stability thresholds and at the fixed reference values.
void write_success_plot(const SweepSummary& summary, const std::string& path);

/// key = value configuration, one per line, '#' comments. Accepts either
/// an explicit `alpha_grid = a,b,c` list or `alpha_min/alpha_max/alpha_step`.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig parse_sweep_config_file(const std::string& path);

}  // namespace symtensor
