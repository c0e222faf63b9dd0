#include "cli_app.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "lorenz_el/calibration.hpp"
#include "lorenz_el/ci_inversion.hpp"
#include "lorenz_el/data_pipeline.hpp"
#include "lorenz_el/distributions.hpp"
#include "lorenz_el/errors.hpp"
#include "lorenz_el/sim_harness.hpp"

namespace lorenz::cli {

namespace {

// Usage problems detected after CLI11 parsing.
struct UsageError : Error {
    explicit UsageError(const std::string& what) : Error("UsageError", what) {}
};

// Too few usable observations after loading and filtering.
struct DataError : Error {
    explicit DataError(const std::string& what) : Error("DataError", what) {}
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

double parse_double(const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("not a number: '" + text + "'");
}

std::vector<VariantKind> parse_methods(const std::string& text) {
    std::vector<VariantKind> methods;
    for (const std::string& name : split(text, ',')) {
        const auto kind = parse_variant(name);
        if (!kind) throw UsageError("unknown method '" + name + "' (expected el, ael, tel, tael)");
        methods.push_back(*kind);
    }
    if (methods.empty()) throw UsageError("no methods given");
    return methods;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> sizes;
    for (const std::string& item : split(text, ',')) {
        const double v = parse_double(item);
        if (!(v >= 2.0) || v != std::floor(v)) throw UsageError("bad sample size '" + item + "'");
        sizes.push_back(static_cast<std::size_t>(v));
    }
    if (sizes.empty()) throw UsageError("no sample sizes given");
    return sizes;
}

std::string format(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// Resolves "-" to the caller's stream, anything else to a file.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (path == "-" || path.empty()) {
            stream_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw FileError("cannot write '" + path + "'");
        stream_ = file_.get();
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

Sample load_sample(const std::string& input, const std::string& value_column,
                   const std::optional<std::string>& group_column,
                   const std::optional<std::string>& group, std::ostream& err) {
    const IncomeTable table = load_csv(input, value_column, group_column);
    if (table.dropped > 0) {
        err << "warning: dropped " << table.dropped << " row(s) with a missing or non-numeric "
            << value_column << '\n';
    }
    std::vector<double> values = table.values(group);
    if (values.size() < 2) {
        throw DataError("need at least two usable values" +
                        (group ? " for group '" + *group + "'" : std::string()) + ", found " +
                        std::to_string(values.size()));
    }
    return Sample(std::move(values));
}

struct CiArgs {
    std::string input;
    std::string value_column;
    std::string group_column;
    std::string group;
    std::string t_list = "0.1..0.9:0.1";
    std::string methods = "el,ael,tel,tael";
    double alpha = 0.05;
    std::string output = "-";
    bool raw = false;
};

void run_ci(const CiArgs& args, std::ostream& out, std::ostream& err) {
    const std::vector<double> ts = parse_t_list(args.t_list);
    const std::vector<VariantKind> methods = parse_methods(args.methods);
    if (!(args.alpha > 0.0 && args.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
    if (!args.group.empty() && args.group_column.empty()) {
        throw UsageError("--group requires --group-column");
    }
    const SignificanceLevel level(args.alpha);
    const Sample s = load_sample(
        args.input, args.value_column,
        args.group_column.empty() ? std::nullopt : std::optional(args.group_column),
        args.group.empty() ? std::nullopt : std::optional(args.group), err);

    std::ostringstream body;
    const char* num = args.raw ? "%.17g" : "%.4f";
    body << "t,estimate,method,lower,upper,length\n";
    for (double t : ts) {
        const OrdinateQuery q(t);
        for (VariantKind kind : methods) {
            const ConfidenceInterval ci = invert(kind, s, q, level);
            require_bracketed(ci);
            body << format("%g", t) << ',' << format(num, ci.estimate) << ',' << to_string(kind)
                 << ',' << format(num, ci.lower) << ',' << format(num, ci.upper) << ','
                 << format(num, interval_length(ci)) << '\n';
        }
    }
    Output sink(args.output, out);
    sink.get() << body.str();
}

struct SimulateArgs {
    std::vector<std::string> populations;
    std::string n_list = "25,50,100,150,300,500";
    std::string t_list = "0.1..0.9:0.1";
    std::size_t reps = 10000;
    double alpha = 0.05;
    std::string methods = "el,ael,tel,tael";
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string output = "-";
    bool raw = false;
};

void run_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> pops = args.populations;
    if (pops.empty()) pops = {"weibull:1,2", "chisq:3", "skewnormal:1,3,5"};

    std::vector<ExperimentConfig> configs;
    for (const std::string& spec : pops) {
        ExperimentConfig cfg = ExperimentConfig::defaults(Population::parse(spec));
        cfg.n_grid = parse_sizes(args.n_list);
        cfg.t_grid = parse_t_list(args.t_list);
        cfg.reps = args.reps;
        cfg.alpha = args.alpha;
        cfg.methods = parse_methods(args.methods);
        cfg.seed = SeedSpec{args.seed, 0};
        cfg.threads = args.threads;
        cfg.validate();
        configs.push_back(std::move(cfg));
    }

    std::vector<CellResult> table;
    for (const ExperimentConfig& cfg : configs) {
        auto progress = [&err](const CellResult& c) {
            err << c.population << " n=" << c.n << " t=" << c.t << ' ' << to_string(c.method)
                << " coverage=" << format("%.4f", c.coverage) << '\n';
        };
        for (CellResult& cell : run_experiment(cfg, progress)) table.push_back(std::move(cell));
    }
    std::ostringstream body;
    write_csv(body, table, args.raw);
    Output sink(args.output, out);
    sink.get() << body.str();
}

struct CurveArgs {
    std::string input;
    std::string value_column;
    std::string group_column;
    std::string groups;
    double step = 0.01;
    std::string output = "-";
    std::string output_dir = ".";
    bool raw = false;
};

void run_curve(const CurveArgs& args, std::ostream& out, std::ostream& err) {
    if (!(args.step > 0.0 && args.step < 1.0)) throw UsageError("--step must lie in (0, 1)");
    std::vector<double> grid;
    for (int k = 1;; ++k) {
        const double t = std::round(k * args.step * 1e12) / 1e12;
        if (t >= 1.0) break;
        grid.push_back(t);
    }
    const std::vector<std::string> groups = split(args.groups, ',');
    if (!groups.empty() && args.group_column.empty()) {
        throw UsageError("--groups requires --group-column");
    }
    const std::optional<std::string> group_column =
        args.group_column.empty() ? std::nullopt : std::optional(args.group_column);

    if (groups.empty()) {
        const Sample s = load_sample(args.input, args.value_column, group_column, std::nullopt, err);
        std::ostringstream body;
        write_curve_csv(body, curve(s, grid), args.raw);
        Output sink(args.output, out);
        sink.get() << body.str();
        return;
    }
    std::filesystem::create_directories(args.output_dir);
    for (const std::string& g : groups) {
        // ALL selects every row regardless of group.
        const std::optional<std::string> filter = g == "ALL" ? std::nullopt : std::optional(g);
        const Sample s = load_sample(args.input, args.value_column, group_column, filter, err);
        const std::string path = (std::filesystem::path(args.output_dir) / ("curve_" + g + ".csv")).string();
        std::ostringstream body;
        write_curve_csv(body, curve(s, grid), args.raw);
        Output sink(path, out);
        sink.get() << body.str();
        err << "wrote " << path << '\n';
    }
}

int exit_code_for(const Error& e) {
    const std::string kind = e.kind();
    if (kind == "UsageError" || kind == "DomainError") return kUsage;
    if (kind == "FileError" || kind == "SchemaError" || kind == "DataError") return kData;
    return kNumerical;
}

}  // namespace

std::vector<double> parse_t_list(const std::string& text) {
    std::vector<double> ts;
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        for (const std::string& item : split(text, ',')) ts.push_back(parse_double(item));
    } else {
        const std::string rest = text.substr(dots + 2);
        const auto colon = rest.find(':');
        const double start = parse_double(text.substr(0, dots));
        const double end = parse_double(rest.substr(0, colon));
        const double step = colon == std::string::npos ? 0.1 : parse_double(rest.substr(colon + 1));
        if (!(step > 0.0) || end < start) throw DomainError("bad t range '" + text + "'");
        const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) {
            ts.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
        }
    }
    if (ts.empty()) throw DomainError("empty t list");
    for (double t : ts) {
        if (!(t > 0.0 && t < 1.0)) throw DomainError("t values must lie in (0, 1): '" + text + "'");
    }
    return ts;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Empirical-likelihood confidence intervals for generalized Lorenz ordinates",
                 "lorenz-el"};
    app.require_subcommand(1);

    CiArgs ci;
    CLI::App* ci_cmd = app.add_subcommand("ci", "Confidence intervals for an income sample");
    ci_cmd->add_option("--input", ci.input, "CSV file with a header row")->required();
    ci_cmd->add_option("--value-column", ci.value_column, "Column holding the values")->required();
    ci_cmd->add_option("--group-column", ci.group_column, "Column holding the group key");
    ci_cmd->add_option("--group", ci.group, "Only use rows whose group key equals this");
    ci_cmd->add_option("--t", ci.t_list, "t values: list or start..end[:step]")->capture_default_str();
    ci_cmd->add_option("--methods", ci.methods, "Comma-separated el,ael,tel,tael")->capture_default_str();
    ci_cmd->add_option("--alpha", ci.alpha, "Significance level")->capture_default_str();
    ci_cmd->add_option("--output", ci.output, "Output CSV, - for standard output")->capture_default_str();
    ci_cmd->add_flag("--raw", ci.raw, "Print full precision");

    SimulateArgs sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo bias, MSE, coverage and length");
    sim_cmd->add_option("--population", sim.populations,
                        "weibull:a,b | chisq:k | skewnormal:mu,sigma,lambda (repeatable)");
    sim_cmd->add_option("--n", sim.n_list, "Sample sizes")->capture_default_str();
    sim_cmd->add_option("--t", sim.t_list, "t values: list or start..end[:step]")->capture_default_str();
    sim_cmd->add_option("--reps", sim.reps, "Replications per cell")->capture_default_str();
    sim_cmd->add_option("--alpha", sim.alpha, "Significance level")->capture_default_str();
    sim_cmd->add_option("--methods", sim.methods, "Comma-separated el,ael,tel,tael")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
    sim_cmd->add_option("--threads", sim.threads, "Worker threads, 0 for all cores")->capture_default_str();
    sim_cmd->add_option("--output", sim.output, "Output CSV, - for standard output")->capture_default_str();
    sim_cmd->add_flag("--raw", sim.raw, "Print full precision");

    CurveArgs cv;
    CLI::App* curve_cmd = app.add_subcommand("curve", "Empirical Lorenz and generalized Lorenz curves");
    curve_cmd->add_option("--input", cv.input, "CSV file with a header row")->required();
    curve_cmd->add_option("--value-column", cv.value_column, "Column holding the values")->required();
    curve_cmd->add_option("--group-column", cv.group_column, "Column holding the group key");
    curve_cmd->add_option("--groups", cv.groups, "Comma-separated group keys; ALL for every row");
    curve_cmd->add_option("--step", cv.step, "Grid step in t")->capture_default_str();
    curve_cmd->add_option("--output", cv.output, "Output CSV when no groups are given")->capture_default_str();
    curve_cmd->add_option("--output-dir", cv.output_dir, "Directory for per-group curve_<group>.csv")
        ->capture_default_str();
    curve_cmd->add_flag("--raw", cv.raw, "Print full precision");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (ci_cmd->parsed()) run_ci(ci, out, err);
        if (sim_cmd->parsed()) run_simulate(sim, out, err);
        if (curve_cmd->parsed()) run_curve(cv, out, err);
    } catch (const Error& e) {
        err << "lorenz-el: " << e.kind() << ": " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "lorenz-el: FileError: " << e.what() << '\n';
        return kData;
    }
    return kOk;
}

}  // namespace lorenz::cli
