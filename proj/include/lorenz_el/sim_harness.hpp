#pragma once

// Monte-Carlo study of the ordinate estimator and the four interval methods.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lorenz_el/distributions.hpp"
#include "lorenz_el/variant_kind.hpp"

namespace lorenz {

struct ExperimentConfig {
    Population population;
    std::vector<std::size_t> n_grid;
    std::vector<double> t_grid;
    std::size_t reps = 10000;
    double alpha = 0.05;
    std::vector<VariantKind> methods;
    /// Replication r draws from stream `seed.stream_id + r`.
    SeedSpec seed;
    /// Worker threads for replications; 0 means hardware concurrency.
    unsigned threads = 1;

    /// n in {25, 50, 100, 150, 300, 500}, t in {0.1, ..., 0.9}, 10000
    /// replications, alpha = 0.05, all four methods.
    static ExperimentConfig defaults(Population pop);

    /// Throws DomainError when a grid is empty, reps is zero, n < 2, t or alpha
    /// is outside (0, 1), or no method is selected.
    void validate() const;
};

struct CellResult {
    std::string population;
    std::size_t n = 0;
    double t = 0.0;
    VariantKind method = VariantKind::EL;
    double bias = 0.0;
    double mse = 0.0;
    /// covered / (reps - failures).
    double coverage = 0.0;
    double mean_length = 0.0;
    /// Replications whose interval could not be built (error or unbracketed
    /// endpoint). They are excluded from coverage and mean length.
    std::size_t failures = 0;
    std::size_t reps = 0;
};

CellResult run_cell(const ExperimentConfig& cfg, std::size_t n, double t, VariantKind method);

/// One result per entry of cfg.methods, all computed from the same draws.
std::vector<CellResult> run_cell_methods(const ExperimentConfig& cfg, std::size_t n, double t);

/// Cartesian product ordered by n, then t, then method as listed in the config.
/// `on_cell` is invoked after each cell completes.
std::vector<CellResult> run_experiment(
    const ExperimentConfig& cfg,
    const std::function<void(const CellResult&)>& on_cell = {});

/// Header population,n,t,method,bias,mse,coverage,mean_length,failures.
/// Six decimals unless `raw`, which prints round-trip precision.
void write_csv(std::ostream& out, std::span<const CellResult> cells, bool raw = false);

/// Calls body(i) for i in [0, count) on `threads` workers (0 = hardware
/// concurrency). Indices are claimed dynamically; body must be thread-safe.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace lorenz
