// levytrim: simulate Levy processes at small times, trim their jumps, and
// verify small-time convergence of trimmed values against trimmed-stable
// references.
//
// Subcommands:
//   simulate   sample paths and print per-path summaries
//   represent  draw (trimmed value, boundary jumps) from the exact law
//   trim       sample paths and trim them
//   smooth     evaluate the smoothing transform of a measure
//   converge   run the small-time convergence experiment and write a report
//   diagnose   measure-level diagnostics: index, sign ratio, norming, bounds
//
// Exit codes: 0 all checks passed, 1 a statistical check failed, 2 usage or
// configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "levytrim/levytrim.hpp"

using namespace levytrim;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string output;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 0;
};

std::uint64_t resolve_seed(const CommonOpts& opts, const json& cfg) {
    if (opts.seed_set) return opts.seed;
    if (cfg.contains("seed")) return cfg.at("seed").get<std::uint64_t>();
    if (const char* env = std::getenv("LEVYTRIM_SEED")) {
        return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
    }
    return 1;
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::domain_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

// A config file is either a bare measure spec or a full experiment object
// with a "measure" field.
json measure_part(const json& cfg) {
    return cfg.contains("measure") ? cfg.at("measure") : cfg;
}

TrimSpec parse_mode(const std::string& mode, int r, int s) {
    if (mode == "asymmetric") return {TrimMode::asymmetric, r, s};
    if (mode == "modulus") return {TrimMode::modulus, r, 0};
    throw std::domain_error("unknown trim mode \"" + mode + "\" (asymmetric or modulus)");
}

void emit(const std::string& content, const std::string& output) {
    if (output.empty()) {
        std::cout << content;
    } else {
        write_file_atomic(output, content);
        std::cerr << "wrote " << output << "\n";
    }
}

ExperimentConfig experiment_from_json(const json& cfg) {
    static const std::initializer_list<const char*> allowed = {
        "measure", "mode",    "r",       "s",         "modes",     "t_grid",
        "n",       "seed",    "sampler", "reference", "tolerance", "target_jumps",
        "smooth",  "threads", "reference_m"};
    measure_json::reject_unknown_keys(cfg, allowed, "experiment config");

    ExperimentConfig out;
    out.measure = measure_json::measure_from_json(measure_part(cfg));
    out.measure_echo = ordered_json(measure_part(cfg));
    if (cfg.contains("modes")) {
        for (const auto& m : cfg.at("modes")) {
            out.modes.push_back(
                parse_mode(m.value("mode", "asymmetric"), m.value("r", 0), m.value("s", 0)));
        }
    } else {
        out.modes.push_back(
            parse_mode(cfg.value("mode", "asymmetric"), cfg.value("r", 0), cfg.value("s", 0)));
    }
    if (cfg.contains("t_grid")) {
        out.t_grid = cfg.at("t_grid").get<std::vector<double>>();
    }
    out.n = cfg.value("n", std::size_t{100000});
    out.smooth = cfg.value("smooth", false);
    out.tolerance = cfg.value("tolerance", 0.02);
    out.target_jumps = cfg.value("target_jumps", 256.0);
    out.reference_m = cfg.value("reference_m", std::size_t{1000000});
    const std::string sampler = cfg.value("sampler", "path");
    if (sampler == "path") out.sampler = SamplerChoice::path;
    else if (sampler == "representation") out.sampler = SamplerChoice::representation;
    else if (sampler == "both") out.sampler = SamplerChoice::both;
    else throw std::domain_error("unknown sampler \"" + sampler + "\"");
    const std::string reference = cfg.value("reference", "trimmed_stable");
    if (reference == "trimmed_stable") out.reference = ReferenceChoice::trimmed_stable;
    else if (reference == "empirical_min_t") out.reference = ReferenceChoice::empirical_min_t;
    else throw std::domain_error("unknown reference \"" + reference + "\"");
    return out;
}

int cmd_simulate(const CommonOpts& opts, double t, std::size_t n, double epsilon,
                 const std::string& dump_paths) {
    const json cfg = load_config(opts.config_path);
    const auto measure = measure_json::measure_from_json(measure_part(cfg));
    const std::uint64_t seed = resolve_seed(opts, cfg);
    const double eps = epsilon > 0.0 ? epsilon : default_cutoff(measure, t);

    ordered_json rows = ordered_json::array();
    std::ostringstream csv;
    csv << "value,n_jumps,largest_positive,largest_negative,quadratic_variation\n";
    std::ostringstream paths_csv;
    paths_csv << "path,time,size\n";
    for (std::size_t i = 0; i < n; ++i) {
        Stream rng = Stream::keyed(seed, "cli/simulate", i);
        const auto path = sample_path(measure, t, eps, rng);
        double top_pos = 0.0, top_neg = 0.0;
        for (const auto& j : path.jumps) {
            top_pos = std::max(top_pos, j.size);
            top_neg = std::min(top_neg, j.size);
        }
        if (opts.format == "json") {
            ordered_json row;
            row["value"] = path.value;
            row["n_jumps"] = path.jumps.size();
            row["largest_positive"] = top_pos;
            row["largest_negative"] = top_neg;
            row["quadratic_variation"] = quadratic_variation(path);
            rows.push_back(std::move(row));
        } else {
            csv << format_double(path.value) << ',' << path.jumps.size() << ','
                << format_double(top_pos) << ',' << format_double(top_neg) << ','
                << format_double(quadratic_variation(path)) << '\n';
        }
        if (!dump_paths.empty()) {
            for (const auto& j : path.jumps) {
                paths_csv << i << ',' << format_double(j.time) << ',' << format_double(j.size)
                          << '\n';
            }
        }
    }
    if (!dump_paths.empty()) write_file_atomic(dump_paths, paths_csv.str());
    if (opts.format == "json") {
        ordered_json out;
        out["t"] = t;
        out["epsilon"] = eps;
        out["seed"] = seed;
        out["paths"] = std::move(rows);
        emit(out.dump(2) + "\n", opts.output);
    } else {
        emit(csv.str(), opts.output);
    }
    return 0;
}

int cmd_represent(const CommonOpts& opts, double t, std::size_t n, const std::string& mode,
                  int r, int s) {
    const json cfg = load_config(opts.config_path);
    const auto measure = measure_json::measure_from_json(measure_part(cfg));
    const std::uint64_t seed = resolve_seed(opts, cfg);
    const TrimSpec spec = parse_mode(mode, r, s);

    std::ostringstream csv;
    csv << "trimmed_value,boundary_positive,boundary_negative\n";
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
        Stream rng = Stream::keyed(seed, "cli/represent", i);
        double trimmed, bp = kNaN, bn = kNaN;
        if (spec.mode == TrimMode::asymmetric) {
            const auto draw = sample_trimmed_asym_rep(measure, t, spec.r, spec.s, rng);
            trimmed = draw.trimmed_value;
            bp = draw.rth_positive_jump;
            bn = draw.sth_negative_jump;
        } else {
            const auto draw = sample_trimmed_mod_rep(measure, t, spec.r, rng);
            trimmed = draw.trimmed_value;
            bp = draw.rth_modulus_magnitude;
        }
        if (opts.format == "json") {
            ordered_json row;
            row["trimmed_value"] = trimmed;
            if (!std::isnan(bp)) row["boundary_positive"] = bp;
            if (!std::isnan(bn)) row["boundary_negative"] = bn;
            rows.push_back(std::move(row));
        } else {
            csv << format_double(trimmed) << ',' << format_double(bp) << ',' << format_double(bn)
                << '\n';
        }
    }
    if (opts.format == "json") {
        ordered_json out;
        out["t"] = t;
        out["mode"] = spec.label();
        out["r"] = spec.r;
        out["s"] = spec.s;
        out["seed"] = seed;
        out["draws"] = std::move(rows);
        emit(out.dump(2) + "\n", opts.output);
    } else {
        emit(csv.str(), opts.output);
    }
    return 0;
}

int cmd_trim(const CommonOpts& opts, double t, std::size_t n, const std::string& mode, int r,
             int s, double epsilon) {
    const json cfg = load_config(opts.config_path);
    const auto measure = measure_json::measure_from_json(measure_part(cfg));
    const std::uint64_t seed = resolve_seed(opts, cfg);
    const TrimSpec spec = parse_mode(mode, r, s);
    const int depth = std::max(spec.r, spec.s) + 1;
    const double eps = epsilon > 0.0 ? epsilon : harness_cutoff(measure, t, depth);

    std::ostringstream csv;
    csv << "value,trimmed_value\n";
    for (std::size_t i = 0; i < n; ++i) {
        Stream rng = Stream::keyed(seed, "cli/trim", i);
        const auto path = sample_path(measure, t, eps, rng);
        const double trimmed = spec.mode == TrimMode::asymmetric
                                   ? trim_asymmetric(path, spec.r, spec.s).trimmed_value
                                   : trim_modulus(path, spec.r).trimmed_value;
        csv << format_double(path.value) << ',' << format_double(trimmed) << '\n';
    }
    emit(csv.str(), opts.output);
    return 0;
}

int cmd_smooth(const CommonOpts& opts) {
    const json cfg = load_config(opts.config_path);
    const auto measure = measure_json::measure_from_json(measure_part(cfg));
    const auto base_report = is_diffuse(measure);
    const auto smoothed = make_smoothed(measure);
    const auto smooth_report = is_diffuse(smoothed);

    ordered_json out;
    out["base_diffuse"] = base_report.diffuse;
    ordered_json atoms = ordered_json::array();
    for (const auto& [loc, mass] : base_report.atoms) atoms.push_back({loc, mass});
    out["base_atoms"] = std::move(atoms);
    out["smoothed_diffuse"] = smooth_report.diffuse;
    out["smoothed_gamma"] = smoothed.gamma();
    ordered_json grid = ordered_json::array();
    for (int i = -12; i <= 4; ++i) {
        const double x = std::pow(10.0, static_cast<double>(i) / 4.0);
        ordered_json row;
        row["x"] = x;
        row["base_plus"] = measure.tail(Side::plus, x);
        row["smoothed_plus"] = smoothed.tail(Side::plus, x);
        row["base_minus"] = measure.tail(Side::minus, x);
        row["smoothed_minus"] = smoothed.tail(Side::minus, x);
        grid.push_back(std::move(row));
    }
    out["tails"] = std::move(grid);
    emit(out.dump(2) + "\n", opts.output);
    return smooth_report.diffuse ? 0 : 1;
}

int cmd_converge(const CommonOpts& opts, double t_min, long n_override, double tolerance,
                 const std::string& sampler_override) {
    json cfg = load_config(opts.config_path);
    if (!cfg.contains("measure")) {
        throw std::domain_error("converge needs a full experiment config with a \"measure\"");
    }
    ExperimentConfig exp = experiment_from_json(cfg);
    exp.seed = resolve_seed(opts, cfg);
    exp.threads = opts.threads;
    if (t_min > 0.0) {
        // Keep grid points above t_min, append t_min itself.
        std::vector<double> grid;
        for (double t : exp.t_grid)
            if (t > t_min) grid.push_back(t);
        grid.push_back(t_min);
        exp.t_grid = std::move(grid);
    }
    if (exp.t_grid.empty()) exp.t_grid = {1e-2, 1e-3, 1e-4};
    if (n_override > 0) exp.n = static_cast<std::size_t>(n_override);
    if (tolerance > 0.0) exp.tolerance = tolerance;
    if (!sampler_override.empty()) {
        if (sampler_override == "path") exp.sampler = SamplerChoice::path;
        else if (sampler_override == "representation")
            exp.sampler = SamplerChoice::representation;
        else if (sampler_override == "both") exp.sampler = SamplerChoice::both;
        else throw std::domain_error("unknown sampler \"" + sampler_override + "\"");
    }
    validate_experiment_config(exp);  // config errors surface before any work

    const auto report = convergence_experiment(exp);
    const std::string content =
        opts.format == "csv" ? report_to_csv(report) : report_to_json(report).dump(2) + "\n";
    emit(content, opts.output);
    for (const auto& row : report.rows) {
        std::fprintf(stderr, "t=%-8g %-10s r=%d s=%d ks=%.5f threshold=%.5f shift=%+.4f %s\n",
                     row.t, row.mode.label().c_str(), row.mode.r, row.mode.s, row.ks,
                     row.ks_threshold, row.location_shift, row.pass ? "pass" : "FAIL");
    }
    return report.all_pass ? 0 : 1;
}

int cmd_diagnose(const CommonOpts& opts) {
    const json cfg = load_config(opts.config_path);
    const auto measure = measure_json::measure_from_json(measure_part(cfg));
    const std::uint64_t seed = resolve_seed(opts, cfg);

    ordered_json out;
    const std::vector<double> grid{1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    const auto idx = rv_index_estimate(measure, grid, 2.0);
    out["alpha_est"] = idx.alpha;
    out["alpha_ok"] = idx.ok;
    if (!idx.message.empty()) out["alpha_message"] = idx.message;
    out["alpha_per_point"] = idx.per_point;

    const auto ratio = sign_ratio_estimate(measure, grid);
    out["sign_ratio"] = ratio.limit;
    out["sign_ratio_converged"] = ratio.converged;
    out["sign_ratio_per_point"] = ratio.ratios;

    bool all_pass = idx.ok;
    if (measure.infinite_activity(Side::both)) {
        ordered_json norm = ordered_json::array();
        for (double n : {100.0, 1000.0, 10000.0}) {
            const double r =
                norming(measure, 1.0 / n).b_t / norming(measure, 1.0 / (n + 1.0)).b_t;
            ordered_json row;
            row["n"] = n;
            row["ratio"] = r;
            row["in_window"] = r >= 0.99 && r <= 1.01;
            norm.push_back(std::move(row));
        }
        out["norming_ratios"] = std::move(norm);

        ordered_json cells = ordered_json::array();
        const auto sandwich = order_stat_bound_check(measure, {0.01, 0.001}, {3.0, 6.0, 12.0}, 0,
                                                     seed, opts.threads);
        for (const auto& cell : sandwich) {
            ordered_json c;
            c["t"] = cell.t;
            c["x"] = cell.x;
            c["mass"] = cell.mass;
            c["skipped"] = cell.skipped;
            if (!cell.skipped) {
                c["ratio"] = cell.ratio;
                c["se"] = cell.se;
                c["pass"] = cell.pass;
                all_pass = all_pass && cell.pass;
            }
            cells.push_back(std::move(c));
        }
        out["order_statistic_bounds"] = std::move(cells);
    } else {
        out["note"] = "finite-activity measure: norming and order-statistic checks skipped";
    }
    out["all_pass"] = all_pass;
    emit(out.dump(2) + "\n", opts.output);
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"levytrim: small-time simulation and trimming of Levy processes"};
    app.require_subcommand(1);

    CommonOpts opts;
    double t = 0.01;
    std::size_t n = 10;
    double epsilon = 0.0;
    int r = 1, s = 0;
    std::string mode = "asymmetric";
    std::string dump_paths;
    double t_min = 0.0;
    long n_override = 0;
    double tolerance = 0.0;
    std::string sampler_override;

    auto add_common = [&](CLI::App* cmd, bool with_format = true) {
        cmd->add_option("--config", opts.config_path, "measure or experiment JSON")->required();
        cmd->add_option("--output", opts.output, "output file (default: stdout)");
        if (with_format) {
            cmd->add_option("--format", opts.format, "csv or json")
                ->check(CLI::IsMember({"csv", "json"}));
        }
        cmd->add_option("--seed", opts.seed, "seed override (else config, else LEVYTRIM_SEED)")
            ->each([&](const std::string&) { opts.seed_set = true; });
        cmd->add_option("--threads", opts.threads, "worker count (default: logical cores)");
    };

    auto* simulate = app.add_subcommand("simulate", "sample path summaries");
    add_common(simulate);
    simulate->add_option("--t", t, "horizon")->check(CLI::PositiveNumber);
    simulate->add_option("--n", n, "number of paths");
    simulate->add_option("--epsilon", epsilon, "jump cutoff (default: policy)");
    simulate->add_option("--dump-paths", dump_paths, "CSV dump of (path,time,size)");

    auto* represent = app.add_subcommand("represent", "exact trimmed-law draws");
    add_common(represent);
    represent->add_option("--t", t, "horizon")->check(CLI::PositiveNumber);
    represent->add_option("--n", n, "number of draws");
    represent->add_option("--mode", mode, "asymmetric or modulus");
    represent->add_option("-r,--r", r, "positive / modulus trim order");
    represent->add_option("-s,--s", s, "negative trim order");

    auto* trim = app.add_subcommand("trim", "path sampling plus trimming");
    add_common(trim, false);
    trim->add_option("--t", t, "horizon")->check(CLI::PositiveNumber);
    trim->add_option("--n", n, "number of paths");
    trim->add_option("--mode", mode, "asymmetric or modulus");
    trim->add_option("-r,--r", r, "positive / modulus trim order");
    trim->add_option("-s,--s", s, "negative trim order");
    trim->add_option("--epsilon", epsilon, "jump cutoff (default: policy)");

    auto* smooth = app.add_subcommand("smooth", "smoothing transform report");
    add_common(smooth, false);

    auto* converge = app.add_subcommand("converge", "small-time convergence experiment");
    add_common(converge);
    converge->add_option("--t-min", t_min, "extend the t grid down to this value");
    converge->add_option("--n", n_override, "samples per t (overrides config)");
    converge->add_option("--tolerance", tolerance, "final KS tolerance (overrides config)");
    converge->add_option("--sampler", sampler_override, "path, representation or both");

    auto* diagnose = app.add_subcommand("diagnose", "measure diagnostics");
    add_common(diagnose, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(opts, t, n, epsilon, dump_paths);
        if (represent->parsed()) return cmd_represent(opts, t, n, mode, r, s);
        if (trim->parsed()) return cmd_trim(opts, t, n, mode, r, s, epsilon);
        if (smooth->parsed()) return cmd_smooth(opts);
        if (converge->parsed())
            return cmd_converge(opts, t_min, n_override, tolerance, sampler_override);
        if (diagnose->parsed()) return cmd_diagnose(opts);
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
