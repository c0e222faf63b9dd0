#include "lorenz_el/sim_harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "lorenz_el/calibration.hpp"
#include "lorenz_el/ci_inversion.hpp"
#include "lorenz_el/errors.hpp"

namespace lorenz {

ExperimentConfig ExperimentConfig::defaults(Population pop) {
    ExperimentConfig cfg{std::move(pop), {25, 50, 100, 150, 300, 500}, {}, 10000, 0.05,
                         {kAllVariants.begin(), kAllVariants.end()}, SeedSpec{}, 1};
    for (int i = 1; i <= 9; ++i) cfg.t_grid.push_back(i / 10.0);
    return cfg;
}

void ExperimentConfig::validate() const {
    if (n_grid.empty() || t_grid.empty()) throw DomainError("experiment grids must be nonempty");
    if (reps == 0) throw DomainError("experiment needs at least one replication");
    if (methods.empty()) throw DomainError("experiment needs at least one method");
    for (std::size_t n : n_grid) {
        if (n < 2) throw DomainError("sample sizes must be at least 2");
    }
    for (double t : t_grid) {
        if (!(t > 0.0 && t < 1.0)) throw DomainError("t values must lie in (0, 1)");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const auto spawn = std::min<std::size_t>(threads, count);
        for (std::size_t w = 0; w < spawn; ++w) pool.emplace_back(worker);
    }
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

struct MethodOutcome {
    bool failed = false;
    bool covered = false;
    double length = 0.0;
};

struct Replication {
    double estimate = 0.0;
    std::vector<MethodOutcome> methods;
};

}  // namespace

std::vector<CellResult> run_cell_methods(const ExperimentConfig& cfg, std::size_t n, double t) {
    cfg.validate();
    const OrdinateQuery query(t);
    const SignificanceLevel level(cfg.alpha);
    const double truth = true_ordinate(cfg.population, t);

    std::vector<Replication> reps(cfg.reps);
    parallel_for(cfg.reps, cfg.threads, [&](std::size_t r) {
        const Sample s = sample(cfg.population, n, SeedSpec{cfg.seed.master_seed, cfg.seed.stream_id + r});
        Replication& out = reps[r];
        out.estimate = point_estimate(s, query);
        out.methods.resize(cfg.methods.size());
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            MethodOutcome& o = out.methods[m];
            try {
                const ConfidenceInterval ci = invert(cfg.methods[m], s, query, level);
                if (!ci.bracketed()) {
                    o.failed = true;
                    continue;
                }
                o.covered = ci.contains(truth);
                o.length = interval_length(ci);
            } catch (const Error&) {
                o.failed = true;
            }
        }
    });

    // Fixed-order reduction keeps results independent of the schedule.
    double err_sum = 0.0;
    double sq_sum = 0.0;
    for (const Replication& r : reps) {
        const double e = r.estimate - truth;
        err_sum += e;
        sq_sum += e * e;
    }
    const auto count = static_cast<double>(cfg.reps);

    std::vector<CellResult> results;
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        CellResult cell;
        cell.population = cfg.population.name();
        cell.n = n;
        cell.t = t;
        cell.method = cfg.methods[m];
        cell.bias = err_sum / count;
        cell.mse = sq_sum / count;
        cell.reps = cfg.reps;
        std::size_t covered = 0;
        double length_sum = 0.0;
        for (const Replication& r : reps) {
            const MethodOutcome& o = r.methods[m];
            if (o.failed) {
                ++cell.failures;
                continue;
            }
            covered += o.covered ? 1 : 0;
            length_sum += o.length;
        }
        const std::size_t ok = cfg.reps - cell.failures;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        cell.coverage = ok > 0 ? static_cast<double>(covered) / static_cast<double>(ok) : nan;
        cell.mean_length = ok > 0 ? length_sum / static_cast<double>(ok) : nan;
        results.push_back(std::move(cell));
    }
    return results;
}

CellResult run_cell(const ExperimentConfig& cfg, std::size_t n, double t, VariantKind method) {
    ExperimentConfig single = cfg;
    single.methods = {method};
    return run_cell_methods(single, n, t).front();
}

std::vector<CellResult> run_experiment(const ExperimentConfig& cfg,
                                       const std::function<void(const CellResult&)>& on_cell) {
    cfg.validate();
    std::vector<CellResult> table;
    for (std::size_t n : cfg.n_grid) {
        for (double t : cfg.t_grid) {
            for (CellResult& cell : run_cell_methods(cfg, n, t)) {
                if (on_cell) on_cell(cell);
                table.push_back(std::move(cell));
            }
        }
    }
    return table;
}

void write_csv(std::ostream& out, std::span<const CellResult> cells, bool raw) {
    const char* num = raw ? "%.17g" : "%.6f";
    auto put = [&](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, num, v);
        out << buf;
    };
    out << "population,n,t,method,bias,mse,coverage,mean_length,failures\n";
    for (const CellResult& c : cells) {
        char tbuf[32];
        std::snprintf(tbuf, sizeof tbuf, "%g", c.t);
        out << '"' << c.population << "\"," << c.n << ',' << tbuf << ',' << to_string(c.method) << ',';
        put(c.bias);
        out << ',';
        put(c.mse);
        out << ',';
        put(c.coverage);
        out << ',';
        put(c.mean_length);
        out << ',' << c.failures << '\n';
    }
}

}  // namespace lorenz
