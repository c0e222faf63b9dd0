#pragma once

// Point estimation of generalized Lorenz ordinates and the profile empirical
// log-likelihood ratio for the truncated-mean estimating equation.

#include <cstddef>
#include <span>
#include <vector>

#include "lorenz_el/variant_kind.hpp"

namespace lorenz {

/// Immutable, ascending-sorted set of finite observations (n >= 2).
class Sample {
public:
    /// Sorts `values`. Throws DomainError when fewer than two values are given
    /// or any value is not finite.
    explicit Sample(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double min() const noexcept { return values_.front(); }
    double max() const noexcept { return values_.back(); }
    double mean() const noexcept;

    /// Every observation multiplied by `c`; `c` must be positive.
    Sample scaled(double c) const;

private:
    std::vector<double> values_;
};

/// Position t in the open unit interval at which the ordinate is queried.
class OrdinateQuery {
public:
    /// Throws DomainError unless 0 < t < 1.
    explicit OrdinateQuery(double t);
    double t() const noexcept { return t_; }

private:
    double t_;
};

struct EstimatingValues {
    double quantile = 0.0;
    std::vector<double> truncated;   // X_i if X_i <= quantile, else 0
    double theta = 0.0;
    std::vector<double> deviations;  // truncated[i] - theta
};

struct LagrangeSolution {
    double lambda = 0.0;
    std::vector<double> weights;
    /// Mean of w_i / (1 + lambda w_i) at the returned lambda.
    double residual = 0.0;
    std::size_t iterations = 0;
};

struct LogRatioValue {
    double value = 0.0;
    VariantKind kind = VariantKind::EL;
};

/// Number of order statistics at or below the sample t-quantile, ceil(n t).
/// Products n*t within 1e-9 of an integer are treated as that integer.
std::size_t quantile_rank(std::size_t n, double t);

/// Left-continuous inverse of the empirical CDF: X_(ceil(n t)).
double sample_quantile(const Sample& s, OrdinateQuery q);

/// (1/n) sum X_i 1(X_i <= sample_quantile).
double point_estimate(const Sample& s, OrdinateQuery q);

/// X_i 1(X_i <= quantile) for every observation; ties with the quantile are
/// included.
std::vector<double> truncated_values(const Sample& s, OrdinateQuery q);

EstimatingValues estimating_values(const Sample& s, OrdinateQuery q, double theta);

/// Root of (1/n) sum w_i / (1 + lambda w_i) = 0 inside (-1/max w, -1/min w).
///
/// Safeguarded Newton iteration with bisection fallback. `initial_lambda` is
/// used as the starting point when it lies inside the bracket. All-zero `w`
/// gives lambda = 0 with uniform weights. Throws ConvexHullViolation when zero
/// is not strictly inside the hull of `w`, NonFinite on non-finite input.
LagrangeSolution solve_lambda(std::span<const double> w, double initial_lambda = 0.0);

/// 2 sum log(1 + lambda w_i) at the solution of solve_lambda(w).
double log_ratio_from_deviations(std::span<const double> w, double* lambda_out = nullptr,
                                 double initial_lambda = 0.0);

/// Profile empirical log-likelihood ratio at theta. Throws ConvexHullViolation
/// when theta is not strictly inside (min V, max V).
LogRatioValue log_el_ratio(const Sample& s, OrdinateQuery q, double theta);

}  // namespace lorenz
