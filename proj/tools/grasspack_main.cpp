// Command-line front end: rate-bound tables, crossover roots, randomized
// verification campaigns, ball-mass experiments, and packing runs. Every
// subcommand is deterministic given its flags and seed; reruns produce
// byte-identical output files.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grasspack/grasspack.hpp"

namespace {

constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << payload;
}

nlohmann::json base_report(const std::string& subcommand, std::uint64_t seed,
                           nlohmann::json parameters) {
    return {{"tool_version", grasspack::kToolVersion},
            {"subcommand", subcommand},
            {"seed", seed},
            {"parameters", std::move(parameters)}};
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// ---- bounds ----

int cmd_bounds(int k, std::optional<double> delta_min,
               std::optional<double> delta_max, int steps,
               const std::string& out) {
    const double top = std::sqrt(double(k));
    const double lo = delta_min.value_or(0.01 * top);
    const double hi = delta_max.value_or(top);
    if (!(lo > 0.0) || lo > hi || hi > top * (1.0 + 1e-12))
        throw UsageError("bounds: need 0 < delta-min <= delta-max <= sqrt(k)");
    if (steps < 1) throw UsageError("bounds: steps must be >= 1");
    std::vector<double> grid(steps);
    for (int i = 0; i < steps; ++i)
        grid[i] = steps == 1 ? lo : lo + (hi - lo) * double(i) / double(steps - 1);
    write_output(out, grasspack::rate_table_csv(grasspack::emit_rate_table(k, grid)));
    return 0;
}

// ---- crossover ----

int cmd_crossover(const std::vector<int>& ks, const std::string& which,
                  const std::string& out) {
    if (ks.empty()) throw UsageError("crossover: need at least one k");
    for (int k : ks)
        if (k < 2)
            throw UsageError("crossover: k must be >= 2 (the curves do not "
                             "cross for k=1)");
    const bool want_rr = which == "rr-lp" || which == "both";
    const bool want_lph = which == "lp-hamming" || which == "both";
    if (!want_rr && !want_lph)
        throw UsageError("crossover: --which must be rr-lp, lp-hamming or both");

    std::ostringstream os;
    os << "k";
    if (want_rr) os << ",delta_star";
    if (want_lph) os << ",lp_hamming_crossing";
    os << "\n";
    for (int k : ks) {
        os << k;
        if (want_rr) {
            try {
                os << ',' << grasspack::format_sig12(grasspack::crossover_delta_star(k));
            } catch (const grasspack::NoRoot&) {
                os << ",nan";
                std::cerr << "crossover: no root found for k=" << k << " (rr-lp)\n";
            }
        }
        if (want_lph) {
            try {
                os << ','
                   << grasspack::format_sig12(grasspack::crossover_lp_hamming(k));
            } catch (const grasspack::NoRoot&) {
                os << ",nan";
                std::cerr << "crossover: no root found for k=" << k
                          << " (lp-hamming)\n";
            }
        }
        os << "\n";
    }
    write_output(out, os.str());
    return 0;
}

// ---- verify ----

int cmd_verify(const std::string& suite, std::int64_t trials, std::uint64_t seed,
               int threads, const std::string& out) {
    nlohmann::json results;
    bool pass = false;
    if (suite == "isometry") {
        const auto rep = grasspack::verify_isometry(trials, seed);
        results = grasspack::to_json(rep);
        pass = rep.pass;
    } else if (suite == "density") {
        const auto rep =
            grasspack::verify_density(static_cast<int>(trials), 100, seed);
        results = grasspack::to_json(rep);
        pass = rep.pass;
    } else if (suite == "rankin-ineq") {
        const auto rep = grasspack::verify_quadratic(trials, seed);
        results = grasspack::to_json(rep);
        pass = rep.pass;
    } else if (suite == "counting") {
        const auto rep = grasspack::verify_counting(static_cast<int>(trials),
                                                    20000, seed, threads);
        results = grasspack::to_json(rep);
        pass = rep.pass;
    } else {
        throw UsageError("verify: unknown suite '" + suite +
                         "' (isometry|density|rankin-ineq|counting)");
    }
    nlohmann::json j = base_report("verify", seed,
                                   {{"suite", suite}, {"trials", trials}});
    j.update(results);
    j["results"] = results;
    write_output(out, dump(j));
    return pass ? 0 : kExitVerificationFailure;
}

// ---- volume ----

int cmd_volume(int k, const std::vector<int>& n_list, double ratio,
               std::int64_t samples, std::uint64_t seed, int threads,
               const std::string& out) {
    if (!(ratio > 0.0) || !(ratio < 1.0))
        throw UsageError("volume: --ratio must lie in (0, 1)");
    if (n_list.empty()) throw UsageError("volume: need at least one n");
    for (int n : n_list)
        if (n <= 2 * k)
            throw UsageError("volume: every n must exceed 2k");
    if (samples < 100) throw UsageError("volume: need at least 100 samples");
    std::vector<grasspack::ExponentTracePoint> rows;
    rows.reserve(n_list.size());
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        rows.push_back(grasspack::exponent_trace_point(
            ratio, k, n_list[i], samples, seed + i, threads));
        if (!rows.back().sufficient)
            std::cerr << "volume: ball missed by every sample at n="
                      << n_list[i] << " (row flagged)\n";
    }
    write_output(out, grasspack::exponent_trace_csv(rows));
    return 0;
}

// ---- pack ----

int cmd_pack(int M, int k, int n, int restarts, int iterations, double step,
             double smoothing, std::uint64_t seed, const std::string& out,
             const std::string& report_path) {
    if (M < 1) throw UsageError("pack: M must be >= 1");
    if (k < 1 || 2 * k > n) throw UsageError("pack: need 1 <= k <= n/2");
    if (restarts < 1) throw UsageError("pack: restarts must be >= 1");

    std::optional<grasspack::Code> best;
    bool any_converged = false;
    for (int r = 0; r < restarts; ++r) {
        grasspack::Rng rng = grasspack::Rng::substream(seed, r);
        grasspack::Code start = grasspack::random_code(M, k, n, rng);
        if (M == 1) {
            best = start;
            any_converged = true;
            break;
        }
        const auto result = grasspack::optimize_code(
            start, grasspack::OptimizeOptions{iterations, step, smoothing});
        any_converged = any_converged || result.converged;
        if (!best || result.code.min_distance() > best->min_distance())
            best = result.code;
    }

    std::ostringstream code_text;
    grasspack::write_code(code_text, *best);
    write_output(out, code_text.str());

    const auto rep = grasspack::bound_report(*best);
    nlohmann::json j = base_report("pack", seed,
                                   {{"M", M},
                                    {"k", k},
                                    {"n", n},
                                    {"restarts", restarts},
                                    {"iterations", iterations},
                                    {"step", step},
                                    {"smoothing", smoothing}});
    j["converged"] = any_converged;
    j["code_file"] = out.empty() ? "-" : out;
    j["report"] = grasspack::to_json(rep);
    write_output(report_path, dump(j));

    std::cerr << "pack: M=" << M << " k=" << k << " n=" << n
              << " achieved delta^2="
              << (best->size() > 1
                      ? grasspack::format_sig12(best->min_distance() *
                                                best->min_distance())
                      : std::string("inf"))
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grassmannian chordal-metric packing toolkit"};
    app.set_version_flag("--version", grasspack::kToolVersion);
    app.require_subcommand(1);

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Emit a rate-bound table as CSV");
    int b_k = 3;
    std::optional<double> b_dmin, b_dmax;
    int b_steps = 200;
    std::string b_out;
    bounds->add_option("--k", b_k, "plane dimension")->required();
    bounds->add_option("--delta-min", b_dmin, "smallest distance in the grid");
    bounds->add_option("--delta-max", b_dmax, "largest distance in the grid");
    bounds->add_option("--steps", b_steps, "number of grid points");
    bounds->add_option("--out", b_out, "output file (default stdout)");

    // crossover
    auto* crossover =
        app.add_subcommand("crossover", "Solve for bound crossing points");
    std::vector<int> c_ks;
    std::string c_which = "both";
    std::string c_out;
    crossover->add_option("--k", c_ks, "plane dimensions (comma separated)")
        ->required()
        ->delimiter(',');
    crossover->add_option("--which", c_which, "rr-lp | lp-hamming | both");
    crossover->add_option("--out", c_out, "output file (default stdout)");

    // verify
    auto* verify = app.add_subcommand(
        "verify", "Run a randomized verification campaign, emit a JSON report");
    std::string v_suite;
    std::int64_t v_trials = 100;
    std::uint64_t v_seed = 0;
    int v_threads = 0;
    std::string v_out;
    verify->add_option("suite", v_suite, "isometry|density|rankin-ineq|counting")
        ->required();
    verify->add_option("--trials", v_trials, "campaign size");
    verify->add_option("--seed", v_seed, "random seed");
    verify->add_option("--threads", v_threads, "worker threads (1 = sequential, 0 = auto)");
    verify->add_option("--out", v_out, "output file (default stdout)");

    // volume
    auto* volume = app.add_subcommand(
        "volume", "Ball-mass growth-exponent trace over ambient dimensions");
    int vol_k = 2;
    std::vector<int> vol_n;
    double vol_ratio = 0.5;
    std::int64_t vol_samples = 200000;
    std::uint64_t vol_seed = 0;
    int vol_threads = 0;
    std::string vol_out;
    volume->add_option("--k", vol_k, "plane dimension")->required();
    volume->add_option("--n", vol_n, "ambient dimensions (comma separated)")
        ->required()
        ->delimiter(',');
    volume->add_option("--ratio", vol_ratio, "rho as a fraction of the embedding radius");
    volume->add_option("--samples", vol_samples, "Monte-Carlo samples per n");
    volume->add_option("--seed", vol_seed, "random seed");
    volume->add_option("--threads", vol_threads, "worker threads (1 = sequential, 0 = auto)");
    volume->add_option("--out", vol_out, "output file (default stdout)");

    // pack
    auto* pack = app.add_subcommand(
        "pack", "Optimize a packing and compare it against the bounds");
    int p_M = 0, p_k = 1, p_n = 3, p_restarts = 20, p_iterations = 2000;
    double p_step = 0.1, p_smoothing = 0.25;
    std::uint64_t p_seed = 0;
    std::string p_out = "code.txt";
    std::string p_report = "report.json";
    pack->add_option("--M", p_M, "number of planes")->required();
    pack->add_option("--k", p_k, "plane dimension")->required();
    pack->add_option("--n", p_n, "ambient dimension")->required();
    pack->add_option("--restarts", p_restarts, "independent restarts");
    pack->add_option("--iterations", p_iterations, "optimizer iterations per restart");
    pack->add_option("--step", p_step, "initial step size");
    pack->add_option("--smoothing", p_smoothing, "initial soft-min temperature");
    pack->add_option("--seed", p_seed, "random seed");
    pack->add_option("--out", p_out, "code file");
    pack->add_option("--report", p_report, "JSON report file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (bounds->parsed())
            return cmd_bounds(b_k, b_dmin, b_dmax, b_steps, b_out);
        if (crossover->parsed()) return cmd_crossover(c_ks, c_which, c_out);
        if (verify->parsed())
            return cmd_verify(v_suite, v_trials, v_seed, v_threads, v_out);
        if (volume->parsed())
            return cmd_volume(vol_k, vol_n, vol_ratio, vol_samples, vol_seed,
                              vol_threads, vol_out);
        if (pack->parsed())
            return cmd_pack(p_M, p_k, p_n, p_restarts, p_iterations, p_step,
                            p_smoothing, p_seed, p_out, p_report);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const grasspack::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerificationFailure;
    }
    return 0;
}
