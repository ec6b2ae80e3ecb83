#include "symtensor/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "symtensor/io.hpp"
#include "symtensor/models.hpp"
#include "symtensor/sshopm.hpp"

namespace symtensor {

namespace {

constexpr std::uint64_t kNoiseSalt = 0x6e6f697365ULL;
constexpr std::uint64_t kTrialSalt = 0x747269616cULL;

void validate(const SweepConfig& c) {
    if (c.dim < 1 || c.modes < 2)
        throw std::invalid_argument("sweep: bad tensor shape");
    if (c.starts_per_alpha < 1)
        throw std::invalid_argument("sweep: starts_per_alpha must be >= 1");
    if (c.success_threshold <= 0.0 || c.success_threshold > 1.0)
        throw std::invalid_argument("sweep: success_threshold must be in (0, 1]");
    if (c.noise_redraws < 1)
        throw std::invalid_argument("sweep: noise_redraws must be >= 1");
    if (c.beta_hat_target < 0.0)
        throw std::invalid_argument("sweep: beta_hat_target must be >= 0");
    if (c.threads < 1) throw std::invalid_argument("sweep: threads must be >= 1");
}

void run_tasks(int count, int threads, const std::function<void(int)>& body) {
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < count; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<double> default_alpha_grid() {
    std::vector<double> grid;
    for (int i = -10; i <= 50; ++i) grid.push_back(i / 10.0);
    return grid;
}

SweepResult run_sweep(const SweepConfig& config) {
    validate(config);
    const std::vector<double> grid =
        config.alpha_grid.empty() ? default_alpha_grid() : config.alpha_grid;

    const Eigen::VectorXd planted = Eigen::VectorXd::Unit(config.dim, 0);
    const int per_draw = static_cast<int>(grid.size()) * config.starts_per_alpha;

    SweepResult result;
    result.records.resize(static_cast<std::size_t>(per_draw) * config.noise_redraws);

    for (int draw = 0; draw < config.noise_redraws; ++draw) {
        SymTensorSparse noise =
            config.beta_hat_target > 0.0
                ? random_sparse_noise({config.dim, config.modes, config.nnz_draws,
                                       config.beta_hat_target,
                                       mix_seed(mix_seed(config.master_seed, kNoiseSalt),
                                                static_cast<std::uint64_t>(draw))})
                : SymTensorSparse(config.modes, config.dim, {});
        const RankOnePlusNoise tensor(config.lambda, planted, std::move(noise));

        run_tasks(per_draw, config.threads, [&](int task) {
            const int alpha_index = task / config.starts_per_alpha;
            const int trial = task % config.starts_per_alpha;
            const std::uint64_t seed = mix_seed(
                mix_seed(mix_seed(mix_seed(config.master_seed, kTrialSalt),
                                  static_cast<std::uint64_t>(draw)),
                         static_cast<std::uint64_t>(alpha_index)),
                static_cast<std::uint64_t>(trial));

            SweepRecord rec;
            rec.alpha = grid[alpha_index];
            rec.trial = trial;
            rec.noise_draw = draw;
            try {
                SshopmConfig solver;
                solver.alpha = rec.alpha;
                solver.tol = config.tol;
                solver.max_iters = config.max_iters;
                const SolveResult solved = sshopm_solve(
                    tensor, solver, sample_sphere(config.dim, seed), &planted);
                rec.final_lambda = solved.pair.lambda;
                rec.a_dot_x = planted.dot(solved.pair.x);
                rec.iterations = solved.trace.iterations;
                rec.converged = solved.trace.converged;
                rec.success = rec.converged &&
                              std::abs(rec.a_dot_x) > config.success_threshold;
            } catch (const std::exception&) {
                rec.final_lambda = std::numeric_limits<double>::quiet_NaN();
                rec.a_dot_x = std::numeric_limits<double>::quiet_NaN();
            }
            result.records[static_cast<std::size_t>(draw) * per_draw + task] = rec;
        });
    }

    SweepSummary& summary = result.summary;
    summary.per_alpha.resize(grid.size());
    for (std::size_t ai = 0; ai < grid.size(); ++ai) {
        summary.per_alpha[ai].alpha = grid[ai];
    }
    for (int draw = 0; draw < config.noise_redraws; ++draw) {
        for (std::size_t ai = 0; ai < grid.size(); ++ai) {
            for (int trial = 0; trial < config.starts_per_alpha; ++trial) {
                const std::size_t pos =
                    static_cast<std::size_t>(draw) * per_draw +
                    ai * config.starts_per_alpha + trial;
                summary.per_alpha[ai].runs += 1;
                summary.per_alpha[ai].success_rate +=
                    result.records[pos].success ? 1.0 : 0.0;
            }
        }
    }
    for (auto& a : summary.per_alpha)
        if (a.runs > 0) a.success_rate /= a.runs;

    const NoiseModelParams params{config.lambda, config.modes, config.dim,
                                  config.beta_hat_target};
    summary.threshold_principal = worst_case_stable_shift(params);
    summary.threshold_spurious = spurious_stable_shift_envelope(params);
    summary.threshold_even_mode =
        config.modes % 2 == 0 ? config.beta_hat_target
                              : std::numeric_limits<double>::quiet_NaN();
    return result;
}

void write_records_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
    out << "alpha,trial,noise_draw,final_lambda,a_dot_x,iterations,converged,success\n";
    for (const auto& r : records) {
        out << format_double(r.alpha) << ',' << r.trial << ',' << r.noise_draw
            << ',' << format_double(r.final_lambda) << ','
            << format_double(r.a_dot_x) << ',' << r.iterations << ','
            << (r.converged ? 1 : 0) << ',' << (r.success ? 1 : 0) << '\n';
    }
}

void write_records_csv_file(const std::vector<SweepRecord>& records,
                            const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // keep LF line endings
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_records_csv(records, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

struct PlotFrame {
    double x0, x1;  // data range
    static constexpr double width = 640, height = 420;
    static constexpr double left = 60, right = 20, top = 30, bottom = 50;

    double px(double alpha) const {
        return left + (alpha - x0) / (x1 - x0) * (width - left - right);
    }
    double py(double rate) const {
        return top + (1.0 - rate) * (height - top - bottom);
    }
};

void vertical_marker(std::ostream& out, const PlotFrame& frame, double alpha,
                     const std::string& color, const std::string& dash,
                     const std::string& label, double label_y) {
    if (!(alpha >= frame.x0 && alpha <= frame.x1)) return;
    const double x = frame.px(alpha);
    out << "  <line x1='" << x << "' y1='" << frame.py(1.0) << "' x2='" << x
        << "' y2='" << frame.py(0.0) << "' stroke='" << color
        << "' stroke-dasharray='" << dash << "'/>\n";
    out << "  <text x='" << x + 4 << "' y='" << label_y << "' fill='" << color
        << "' font-size='11'>" << label << "</text>\n";
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

void write_success_plot(const SweepSummary& summary, const std::string& path) {
    if (summary.per_alpha.empty())
        throw std::invalid_argument("plot: summary has no data points");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);

    PlotFrame frame{};
    frame.x0 = summary.per_alpha.front().alpha;
    frame.x1 = summary.per_alpha.back().alpha;
    if (frame.x1 <= frame.x0) {
        frame.x0 -= 0.5;
        frame.x1 += 0.5;
    }

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << PlotFrame::width
        << "' height='" << PlotFrame::height << "' viewBox='0 0 "
        << PlotFrame::width << " " << PlotFrame::height << "'>\n";
    out << "  <rect width='100%' height='100%' fill='white'/>\n";

    // Axes and ticks.
    out << "  <line x1='" << frame.px(frame.x0) << "' y1='" << frame.py(0.0)
        << "' x2='" << frame.px(frame.x1) << "' y2='" << frame.py(0.0)
        << "' stroke='black'/>\n";
    out << "  <line x1='" << frame.px(frame.x0) << "' y1='" << frame.py(0.0)
        << "' x2='" << frame.px(frame.x0) << "' y2='" << frame.py(1.0)
        << "' stroke='black'/>\n";
    for (double tick = std::ceil(frame.x0); tick <= frame.x1 + 1e-9; tick += 1.0) {
        const double x = frame.px(tick);
        out << "  <line x1='" << x << "' y1='" << frame.py(0.0) << "' x2='" << x
            << "' y2='" << frame.py(0.0) + 5 << "' stroke='black'/>\n";
        out << "  <text x='" << x << "' y='" << frame.py(0.0) + 18
            << "' text-anchor='middle' font-size='11'>" << short_num(tick)
            << "</text>\n";
    }
    for (double tick = 0.0; tick <= 1.0 + 1e-9; tick += 0.25) {
        const double y = frame.py(tick);
        out << "  <line x1='" << frame.px(frame.x0) - 5 << "' y1='" << y
            << "' x2='" << frame.px(frame.x0) << "' y2='" << y
            << "' stroke='black'/>\n";
        out << "  <text x='" << frame.px(frame.x0) - 8 << "' y='" << y + 4
            << "' text-anchor='end' font-size='11'>" << short_num(tick)
            << "</text>\n";
    }
    out << "  <text x='" << (frame.px(frame.x0) + frame.px(frame.x1)) / 2
        << "' y='" << PlotFrame::height - 10
        << "' text-anchor='middle' font-size='12'>shift parameter alpha</text>\n";
    out << "  <text x='16' y='" << frame.py(0.5)
        << "' font-size='12' transform='rotate(-90 16 " << frame.py(0.5)
        << ")' text-anchor='middle'>success rate</text>\n";

    // Threshold markers: computed values, then fixed reference values.
    vertical_marker(out, frame, summary.threshold_principal, "#007700", "6,3",
                    "alpha_min principal " + short_num(summary.threshold_principal),
                    frame.py(1.0) + 12);
    vertical_marker(out, frame, summary.threshold_spurious, "#bb0000", "6,3",
                    "alpha_min spurious " + short_num(summary.threshold_spurious),
                    frame.py(1.0) + 26);
    vertical_marker(out, frame, kReferencePrincipalShift, "#55aa55", "2,4",
                    "reference " + short_num(kReferencePrincipalShift),
                    frame.py(1.0) + 40);
    vertical_marker(out, frame, kReferenceSpuriousShift, "#cc6666", "2,4",
                    "reference " + short_num(kReferenceSpuriousShift),
                    frame.py(1.0) + 54);

    // Success-rate curve.
    out << "  <polyline fill='none' stroke='#2244cc' stroke-width='1.5' points='";
    for (const auto& p : summary.per_alpha)
        out << frame.px(p.alpha) << ',' << frame.py(p.success_rate) << ' ';
    out << "'/>\n";
    for (const auto& p : summary.per_alpha) {
        out << "  <circle cx='" << frame.px(p.alpha) << "' cy='"
            << frame.py(p.success_rate) << "' r='2.5' fill='#2244cc'/>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) values.push_back(std::stod(item));
    }
    return values;
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig config;
    double alpha_min = -1.0, alpha_max = 5.0, alpha_step = 0.1;
    bool have_range = false, have_grid = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("sweep config line " + std::to_string(line_no) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "n") config.dim = std::stoi(value);
            else if (key == "m") config.modes = std::stoi(value);
            else if (key == "nnz_draws") config.nnz_draws = std::stoi(value);
            else if (key == "beta_hat_target") config.beta_hat_target = std::stod(value);
            else if (key == "lambda") config.lambda = std::stod(value);
            else if (key == "alpha_grid") { config.alpha_grid = parse_list(value); have_grid = true; }
            else if (key == "alpha_min") { alpha_min = std::stod(value); have_range = true; }
            else if (key == "alpha_max") { alpha_max = std::stod(value); have_range = true; }
            else if (key == "alpha_step") { alpha_step = std::stod(value); have_range = true; }
            else if (key == "starts_per_alpha") config.starts_per_alpha = std::stoi(value);
            else if (key == "success_threshold") config.success_threshold = std::stod(value);
            else if (key == "master_seed") config.master_seed = std::stoull(value);
            else if (key == "noise_redraws") config.noise_redraws = std::stoi(value);
            else if (key == "tol") config.tol = std::stod(value);
            else if (key == "max_iters") config.max_iters = std::stoi(value);
            else if (key == "threads") config.threads = std::stoi(value);
            else
                throw std::runtime_error("unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("sweep config line " + std::to_string(line_no) +
                                     ": bad value for '" + key + "'");
        }
    }
    if (have_grid && have_range)
        throw std::runtime_error(
            "sweep config: give alpha_grid or alpha_min/max/step, not both");
    if (have_range) {
        if (alpha_step <= 0.0)
            throw std::runtime_error("sweep config: alpha_step must be > 0");
        for (double a = alpha_min; a <= alpha_max + alpha_step * 0.5; a += alpha_step)
            config.alpha_grid.push_back(a);
    }
    if (config.alpha_grid.empty() && !have_grid) config.alpha_grid = default_alpha_grid();
    if (config.alpha_grid.empty())
        throw std::runtime_error("sweep config: alpha grid is empty");
    return config;
}

SweepConfig parse_sweep_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return parse_sweep_config(in);
}

}  // namespace symtensor
