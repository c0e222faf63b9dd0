#include <doctest.h>

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lorenz_el/errors.hpp"
#include "lorenz_el/sim_harness.hpp"

using namespace lorenz;

namespace {

ExperimentConfig small_config(const char* population = "weibull:1,2") {
    ExperimentConfig cfg = ExperimentConfig::defaults(Population::parse(population));
    cfg.n_grid = {25, 50};
    cfg.t_grid = {0.3, 0.7};
    cfg.reps = 60;
    cfg.seed = SeedSpec{99, 0};
    return cfg;
}

bool same_cell(const CellResult& a, const CellResult& b) {
    const auto eq = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
    return a.population == b.population && a.n == b.n && a.t == b.t && a.method == b.method &&
           eq(a.bias, b.bias) && eq(a.mse, b.mse) && eq(a.coverage, b.coverage) &&
           eq(a.mean_length, b.mean_length) && a.failures == b.failures && a.reps == b.reps;
}

}  // namespace

TEST_CASE("default configuration") {
    const ExperimentConfig cfg = ExperimentConfig::defaults(Population::parse("chisq:3"));
    CHECK(cfg.n_grid == std::vector<std::size_t>{25, 50, 100, 150, 300, 500});
    REQUIRE(cfg.t_grid.size() == 9);
    CHECK(cfg.t_grid.front() == doctest::Approx(0.1));
    CHECK(cfg.t_grid.back() == doctest::Approx(0.9));
    CHECK(cfg.reps == 10000);
    CHECK(cfg.alpha == 0.05);
    CHECK(cfg.methods.size() == 4);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("configuration validation") {
    const auto broken = [](auto mutate) {
        ExperimentConfig cfg = small_config();
        mutate(cfg);
        return cfg;
    };
    CHECK_THROWS_AS(broken([](ExperimentConfig& c) { c.reps = 0; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](ExperimentConfig& c) { c.n_grid.clear(); }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](ExperimentConfig& c) { c.n_grid = {1}; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](ExperimentConfig& c) { c.t_grid = {1.0}; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](ExperimentConfig& c) { c.alpha = 0.0; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](ExperimentConfig& c) { c.methods.clear(); }).validate(), DomainError);
}

TEST_CASE("experiment grid order and size") {
    const ExperimentConfig cfg = small_config();
    std::size_t callbacks = 0;
    const std::vector<CellResult> cells = run_experiment(cfg, [&](const CellResult&) { ++callbacks; });
    REQUIRE(cells.size() == 2 * 2 * 4);
    CHECK(callbacks == cells.size());
    std::size_t i = 0;
    for (std::size_t n : cfg.n_grid) {
        for (double t : cfg.t_grid) {
            for (VariantKind m : cfg.methods) {
                CHECK(cells[i].n == n);
                CHECK(cells[i].t == t);
                CHECK(cells[i].method == m);
                CHECK(cells[i].population == "weibull(1,2)");
                CHECK(cells[i].reps == cfg.reps);
                ++i;
            }
        }
    }
}

TEST_CASE("cell invariants") {
    for (const char* pop : {"weibull:1,2", "chisq:3", "skewnormal:1,3,5"}) {
        CAPTURE(pop);
        const std::vector<CellResult> cells = run_experiment(small_config(pop));
        for (std::size_t i = 0; i < cells.size(); i += 4) {
            const CellResult& el = cells[i];
            const CellResult& ael = cells[i + 1];
            const CellResult& tel = cells[i + 2];
            const CellResult& tael = cells[i + 3];
            for (std::size_t k = 0; k < 4; ++k) {
                const CellResult& c = cells[i + k];
                CHECK(c.bias * c.bias <= c.mse * (1.0 + 1e-12));
                CHECK(c.failures <= c.reps);
                CHECK(c.coverage >= 0.0);
                CHECK(c.coverage <= 1.0);
                CHECK(c.mean_length > 0.0);
                // The point estimate does not depend on the method.
                CHECK(c.bias == el.bias);
                CHECK(c.mse == el.mse);
            }
            if (el.failures == 0 && tel.failures == 0) CHECK(tel.coverage >= el.coverage);
            if (ael.failures == 0 && tael.failures == 0) CHECK(tael.coverage >= ael.coverage);
            CHECK(tel.mean_length >= el.mean_length);
            CHECK(tael.mean_length >= ael.mean_length);
        }
    }
}

TEST_CASE("results are reproducible and independent of the thread count") {
    ExperimentConfig cfg = small_config("chisq:3");
    const std::vector<CellResult> a = run_experiment(cfg);
    const std::vector<CellResult> b = run_experiment(cfg);
    cfg.threads = 4;
    const std::vector<CellResult> c = run_experiment(cfg);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == c.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(same_cell(a[i], b[i]));
        CHECK(same_cell(a[i], c[i]));
    }
    cfg.seed.master_seed = 100;
    const std::vector<CellResult> d = run_experiment(cfg);
    CHECK(d[0].bias != a[0].bias);
}

TEST_CASE("single-method cells match the shared-draw run") {
    const ExperimentConfig cfg = small_config("skewnormal:1,3,5");
    const std::vector<CellResult> all = run_cell_methods(cfg, 50, 0.7);
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        CHECK(same_cell(run_cell(cfg, 50, 0.7, cfg.methods[m]), all[m]));
    }
}

TEST_CASE("degenerate replications count as failures") {
    // n = 2 at t = 0.3 keeps only the minimum, so the scale factor is undefined.
    ExperimentConfig cfg = small_config();
    cfg.n_grid = {2};
    cfg.t_grid = {0.3};
    cfg.reps = 20;
    const CellResult cell = run_cell(cfg, 2, 0.3, VariantKind::EL);
    CHECK(cell.failures == 20);
    CHECK(std::isnan(cell.coverage));
    CHECK(std::isnan(cell.mean_length));
    CHECK(std::isfinite(cell.bias));
}

TEST_CASE("parallel_for") {
    for (unsigned threads : {0u, 1u, 3u, 8u}) {
        std::vector<std::atomic<int>> hits(257);
        parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
        for (const auto& h : hits) CHECK(h.load() == 1);
    }
    parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
    CHECK_THROWS_AS(parallel_for(16, 4, [](std::size_t i) {
                        if (i == 11) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
}

TEST_CASE("CSV output") {
    CellResult c;
    c.population = "weibull(1,2)";
    c.n = 25;
    c.t = 0.1;
    c.method = VariantKind::TAEL;
    c.bias = 0.00123456789;
    c.mse = 0.5;
    c.coverage = 0.95;
    c.mean_length = 1.0 / 3.0;
    c.failures = 2;
    c.reps = 100;
    const std::vector<CellResult> cells{c};

    std::ostringstream fixed;
    write_csv(fixed, cells);
    CHECK(fixed.str() ==
          "population,n,t,method,bias,mse,coverage,mean_length,failures\n"
          "\"weibull(1,2)\",25,0.1,TAEL,0.001235,0.500000,0.950000,0.333333,2\n");

    std::ostringstream raw;
    write_csv(raw, cells, true);
    const std::string line = raw.str().substr(raw.str().find('\n') + 1);
    CHECK(line.rfind("\"weibull(1,2)\",25,0.1,TAEL,", 0) == 0);
    std::istringstream fields(line.substr(line.find("TAEL,") + 5));
    std::string field;
    std::vector<double> parsed;
    while (std::getline(fields, field, ',')) parsed.push_back(std::stod(field));
    REQUIRE(parsed.size() == 5);
    CHECK(parsed[0] == c.bias);
    CHECK(parsed[1] == c.mse);
    CHECK(parsed[2] == c.coverage);
    CHECK(parsed[3] == c.mean_length);
    CHECK(parsed[4] == 2.0);
}
