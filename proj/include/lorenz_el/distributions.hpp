#pragma once

// Simulation populations: samplers and exact generalized Lorenz ordinates.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <variant>

#include "lorenz_el/el_core.hpp"

namespace lorenz {

struct Weibull {
    double shape = 1.0;
    double scale = 1.0;
};

struct ChiSquare {
    double df = 1.0;
};

struct SkewNormal {
    double location = 0.0;
    double scale = 1.0;
    double shape = 0.0;
};

class Population {
public:
    using Params = std::variant<Weibull, ChiSquare, SkewNormal>;

    /// Throws DomainError on non-positive shape/scale/df.
    explicit Population(Params params);

    const Params& params() const noexcept { return params_; }

    /// e.g. "weibull(1,2)", "chisq(3)", "skewnormal(1,3,5)".
    std::string name() const;

    double mean() const;
    double variance() const;
    double pdf(double x) const;
    double cdf(double x) const;

    /// Smallest x with cdf(x) >= p. Closed form for Weibull; CDF bisection to
    /// 1e-12 otherwise.
    double quantile(double p) const;

    /// Lower end of the support (0, or -infinity for the skew-normal).
    double support_min() const;

    /// Parses "weibull:a,b", "chisq:k", "skewnormal:mu,sigma,lambda".
    /// Throws DomainError on anything else.
    static Population parse(const std::string& spec);

private:
    Params params_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Identifies an independent random stream. Stream `stream_id` of master seed
/// `master_seed` is seeded with
/// splitmix64(splitmix64(master_seed) ^ (stream_id + 1) * 0x9E3779B97F4A7C15).
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    std::uint64_t child_seed() const noexcept;
};

/// Per-stream variate generator.
///
/// Weibull by inverse CDF b (-ln U)^(1/a); chi-square as a sum of squared
/// normals (integer df) or a gamma draw; skew-normal as
/// mu + sigma (delta |Z0| + sqrt(1 - delta^2) Z1), delta = lambda / sqrt(1 + lambda^2).
class Sampler {
public:
    Sampler(Population pop, SeedSpec seed);
    double operator()();

private:
    Population pop_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// n i.i.d. draws on the stream named by `seed`.
Sample sample(const Population& pop, std::size_t n, SeedSpec seed);

/// E[X 1(X <= psi_t)] with psi_t the population t-quantile, by tanh-sinh
/// quadrature on [0, psi_t] or adaptive Gauss-Kronrod on (-inf, psi_t]. Throws
/// QuadratureFailure when the error estimate exceeds 1e-10 of the integral of
/// |x| f(x).
double true_ordinate(const Population& pop, double t);

}  // namespace lorenz
