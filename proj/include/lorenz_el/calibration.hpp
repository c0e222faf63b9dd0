#pragma once

#include "lorenz_el/el_core.hpp"
#include "lorenz_el/variant_kind.hpp"

namespace lorenz {

/// Plug-in estimate of the multiplier that makes the log-ratio asymptotically
/// chi-square with one degree of freedom.
struct ScaleFactor {
    double sigma_p_sq = 0.0;  // variance of X 1(X <= psi)
    double sigma_v_sq = 0.0;  // variance of (X - psi) 1(X <= psi)
    double ratio = 0.0;       // sigma_p_sq / sigma_v_sq
};

/// Divide-by-n variances at the sample quantile. Independent of theta.
/// Throws DegenerateVariance when sigma_v_sq is zero.
ScaleFactor scale_factor(const Sample& s, OrdinateQuery q);

/// Standard normal inverse CDF, absolute error well below 1e-12 on (0, 1).
double normal_quantile(double p);

/// Upper-alpha quantile of chi-square(1). Throws DomainError outside (0, 1).
double chi2_crit(double alpha);

class SignificanceLevel {
public:
    explicit SignificanceLevel(double alpha);
    double alpha() const noexcept { return alpha_; }
    double confidence() const noexcept { return 1.0 - alpha_; }
    double chi2_crit() const noexcept { return crit_; }

private:
    double alpha_;
    double crit_;
};

/// (sigma_p^2 / sigma_v^2) * l_kind(theta).
double scaled_statistic(VariantKind kind, const Sample& s, OrdinateQuery q, double theta);

}  // namespace lorenz
