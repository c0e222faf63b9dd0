#pragma once

// Adjusted, transformed and transformed-adjusted log-likelihood ratios.

#include <cstddef>
#include <span>
#include <vector>

#include "lorenz_el/el_core.hpp"
#include "lorenz_el/variant_kind.hpp"

namespace lorenz {

/// a_n = max{1, log(n) / 2}, natural log.
class AdjustmentFactor {
public:
    explicit AdjustmentFactor(std::size_t n);
    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Expansion parameter of the transformed ratio, gamma in [0, 1].
class TelParameter {
public:
    explicit TelParameter(double gamma = 0.5);
    double gamma() const noexcept { return gamma_; }

private:
    double gamma_;
};

/// `w` followed by the pseudo-observation -a_n * mean(w).
std::vector<double> ael_augment(std::span<const double> w, AdjustmentFactor a);

/// l * max{1 - l/n, 1 - gamma}.
double tel_transform(double l, std::size_t n, TelParameter p = TelParameter{});

LogRatioValue log_ael_ratio(const Sample& s, OrdinateQuery q, double theta);
LogRatioValue log_tel_ratio(const Sample& s, OrdinateQuery q, double theta);

/// tel_transform of the adjusted ratio, dividing by the original n.
LogRatioValue log_tael_ratio(const Sample& s, OrdinateQuery q, double theta);

LogRatioValue log_ratio(VariantKind kind, const Sample& s, OrdinateQuery q, double theta);

/// Unscaled log-ratio of `kind` given the truncated values V_i directly.
/// `scratch` is reused for the deviation vector; `lambda_hint` carries a warm
/// start for the multiplier between nearby calls and is updated on return.
double log_ratio_from_truncated(VariantKind kind, std::span<const double> truncated,
                                double theta, std::vector<double>& scratch,
                                double* lambda_hint = nullptr);

}  // namespace lorenz
