// Command-line front end: solve eigenpairs from tensor files, print
// shift-threshold reports, run the shift-parameter sweep, and generate
// model tensors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "symtensor/bounds.hpp"
#include "symtensor/io.hpp"
#include "symtensor/models.hpp"
#include "symtensor/random.hpp"
#include "symtensor/sshopm.hpp"
#include "symtensor/sweep.hpp"
#include "symtensor/tensor.hpp"

namespace {

using nlohmann::json;

int run_solve(const std::string& tensor_path, double alpha, std::uint64_t seed,
              int starts, double tol, int max_iters) {
    const symtensor::SymTensorSparse tensor =
        symtensor::read_tensor_file(tensor_path);
    int failures = 0;
    for (int s = 0; s < starts; ++s) {
        symtensor::SshopmConfig config;
        config.alpha = alpha;
        config.tol = tol;
        config.max_iters = max_iters;
        config.seed = symtensor::mix_seed(seed, static_cast<std::uint64_t>(s));

        json line;
        line["start"] = s;
        line["alpha"] = alpha;
        try {
            const symtensor::SolveResult result =
                symtensor::sshopm_solve(tensor, config);
            line["lambda"] = result.pair.lambda;
            line["residual"] = result.pair.residual;
            line["iterations"] = result.trace.iterations;
            line["converged"] = result.trace.converged;
            line["stability"] = symtensor::to_string(result.pair.stability);
            line["x"] = std::vector<double>(
                result.pair.x.data(), result.pair.x.data() + result.pair.x.size());
            if (!result.trace.converged) ++failures;
        } catch (const std::exception& e) {
            line["error"] = e.what();
            ++failures;
        }
        std::cout << line.dump() << '\n';
    }
    return failures == starts ? 1 : 0;
}

int run_bounds(double lambda, int modes, int dim, double beta_noise,
               double epsilon, double gamma) {
    const symtensor::NoiseModelParams params{lambda, modes, dim, beta_noise};
    std::cout << symtensor::format_shift_report(
        symtensor::make_shift_report(params, epsilon, gamma));
    return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& csv_path,
                  const std::string& plot_path,
                  std::optional<std::uint64_t> seed_override,
                  std::optional<int> threads_override) {
    symtensor::SweepConfig config =
        symtensor::parse_sweep_config_file(config_path);
    if (seed_override) config.master_seed = *seed_override;
    if (threads_override) config.threads = *threads_override;

    const symtensor::SweepResult result = symtensor::run_sweep(config);
    symtensor::write_records_csv_file(result.records, csv_path);
    symtensor::write_success_plot(result.summary, plot_path);

    std::cout << "alpha,success_rate\n";
    for (const auto& a : result.summary.per_alpha)
        std::cout << symtensor::format_double(a.alpha) << ','
                  << symtensor::format_double(a.success_rate) << '\n';
    std::cout << "# threshold principal: "
              << symtensor::format_double(result.summary.threshold_principal)
              << " (reference " << symtensor::kReferencePrincipalShift << ")\n";
    std::cout << "# threshold spurious envelope: "
              << symtensor::format_double(result.summary.threshold_spurious)
              << " (reference " << symtensor::kReferenceSpuriousShift << ")\n";
    std::cout << "# wrote " << csv_path << " and " << plot_path << '\n';
    return 0;
}

int run_gen_noise(int n, int m, int draws, double target, std::uint64_t seed,
                  const std::string& output) {
    const symtensor::SymTensorSparse noise =
        symtensor::random_sparse_noise({n, m, draws, target, seed});
    symtensor::write_tensor_file(noise, output);
    std::cout << "wrote " << output << " (" << noise.terms().size()
              << " canonical terms, beta_hat = "
              << symtensor::format_double(symtensor::beta_hat(noise)) << ")\n";
    return 0;
}

int run_tvca2(const std::string& matrix_path, const std::string& output) {
    const symtensor::Tvca2Input input{symtensor::read_matrices_file(matrix_path)};
    const symtensor::SymTensorDense tensor = symtensor::build_tvca2(input);
    symtensor::write_tensor_file(symtensor::sparsify(tensor), output);
    std::cout << "wrote " << output << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetric-tensor eigenpair toolkit (shifted power method)"};
    app.require_subcommand(1);

    // solve
    std::string tensor_path;
    double alpha = 0.0, tol = 1e-10;
    std::uint64_t seed = 0;
    int starts = 1, max_iters = 1000;
    auto* solve = app.add_subcommand(
        "solve", "Find eigenpairs of a tensor file; one JSON line per start");
    solve->add_option("tensor", tensor_path, "tensor file")->required();
    solve->add_option("--alpha", alpha, "shift parameter");
    solve->add_option("--seed", seed, "random seed for start vectors");
    solve->add_option("--starts", starts, "number of random starts")
        ->check(CLI::PositiveNumber);
    solve->add_option("--tol", tol, "convergence tolerance");
    solve->add_option("--max-iters", max_iters, "iteration cap");

    // bounds
    double lambda = 1.0, beta_noise = 0.03, epsilon = 0.9, gamma = 1.0;
    int modes = 4, dim = 100;
    std::uint64_t bounds_seed = 0;
    auto* bounds = app.add_subcommand(
        "bounds", "Print eigenvalue/angle bounds and shift thresholds");
    bounds->add_option("--lambda", lambda, "planted weight (> 0)");
    bounds->add_option("--m", modes, "mode count");
    bounds->add_option("--n", dim, "dimension");
    bounds->add_option("--beta-e", beta_noise, "noise shift bound");
    bounds->add_option("--epsilon", epsilon, "alignment level for certificates");
    bounds->add_option("--gamma", gamma, "start alignment for the one-step threshold");
    bounds->add_option("--seed", bounds_seed, "accepted for uniformity; unused");

    // sweep
    std::string sweep_config, csv_path = "sweep.csv", plot_path = "sweep.svg";
    std::optional<std::uint64_t> sweep_seed;
    std::optional<int> sweep_threads;
    auto* sweep = app.add_subcommand(
        "sweep", "Run the success-rate-vs-shift experiment from a config file");
    sweep->add_option("--config", sweep_config, "key=value config file")->required();
    sweep->add_option("--csv", csv_path, "output CSV path");
    sweep->add_option("--plot", plot_path, "output SVG path");
    sweep->add_option("--seed", sweep_seed, "override master_seed");
    sweep->add_option("--threads", sweep_threads, "override worker threads");

    // gen-noise
    int gn_n = 100, gn_m = 4, gn_draws = 500;
    double gn_target = 0.03;
    std::uint64_t gn_seed = 0;
    std::string gn_output = "noise.tns";
    auto* gen = app.add_subcommand("gen-noise",
                                   "Generate a random sparse symmetric tensor");
    gen->add_option("--n", gn_n, "dimension");
    gen->add_option("--m", gn_m, "mode count");
    gen->add_option("--draws", gn_draws, "random index draws");
    gen->add_option("--beta-hat-target", gn_target, "target beta_hat");
    gen->add_option("--seed", gn_seed, "random seed");
    gen->add_option("--output", gn_output, "output tensor file");

    // tvca2
    std::string matrix_path, tvca_output = "tvca2.tns";
    std::uint64_t tvca_seed = 0;
    auto* tvca = app.add_subcommand(
        "tvca2", "Build the degree-4 tensor for a covariance matrix set");
    tvca->add_option("matrices", matrix_path, "matrix file")->required();
    tvca->add_option("--output", tvca_output, "output tensor file");
    tvca->add_option("--seed", tvca_seed, "accepted for uniformity; unused");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return run_solve(tensor_path, alpha, seed, starts, tol, max_iters);
        if (*bounds) return run_bounds(lambda, modes, dim, beta_noise, epsilon, gamma);
        if (*sweep)
            return run_sweep_cmd(sweep_config, csv_path, plot_path, sweep_seed,
                                 sweep_threads);
        if (*gen) return run_gen_noise(gn_n, gn_m, gn_draws, gn_target, gn_seed,
                                       gn_output);
        if (*tvca) return run_tvca2(matrix_path, tvca_output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
