#pragma once

// Confidence intervals for a generalized Lorenz ordinate by inverting the
// scaled log-likelihood ratio against the chi-square(1) critical value.

#include <cstddef>
#include <vector>

#include "lorenz_el/calibration.hpp"
#include "lorenz_el/el_core.hpp"
#include "lorenz_el/variant_kind.hpp"

namespace lorenz {

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double estimate = 0.0;
    double level = 0.0;  // 1 - alpha
    VariantKind kind = VariantKind::EL;
    std::size_t iterations = 0;  // statistic evaluations, both sides
    bool lower_bracketed = false;
    bool upper_bracketed = false;
    bool fallback_used = false;  // grid search replaced plain bisection on a side

    bool bracketed() const noexcept { return lower_bracketed && upper_bracketed; }
    bool contains(double theta) const noexcept { return lower <= theta && theta <= upper; }
};

struct InversionOptions {
    /// Bisection stops once the bracket is narrower than this times
    /// max(|estimate|, hull width).
    double relative_tolerance = 1e-10;
    /// Adjusted variants search at most this many hull widths past the estimate.
    double adjusted_search_cap = 10.0;
    std::size_t fallback_grid = 2048;
    /// Skip bisection and use the grid search on both sides.
    bool force_grid = false;
};

/// Scaled statistic theta -> ratio * l_kind(theta) for one (sample, t, kind).
///
/// Precomputes the truncated values and the scale factor; EL and TEL evaluate
/// to +infinity outside the open hull of the truncated values. Holds scratch
/// space, so an instance must not be shared between threads.
class StatisticProfile {
public:
    StatisticProfile(VariantKind kind, const Sample& s, OrdinateQuery q);

    double operator()(double theta) const;

    VariantKind kind() const noexcept { return kind_; }
    double estimate() const noexcept { return estimate_; }
    double hull_min() const noexcept { return vmin_; }
    double hull_max() const noexcept { return vmax_; }
    const ScaleFactor& scale() const noexcept { return scale_; }
    std::size_t sample_size() const noexcept { return truncated_.size(); }

private:
    VariantKind kind_;
    std::vector<double> truncated_;
    ScaleFactor scale_;
    double estimate_;
    double vmin_;
    double vmax_;
    mutable std::vector<double> scratch_;
    mutable double lambda_hint_ = 0.0;
};

/// Search domain of `invert` for this profile: the open hull, pulled in by
/// 1e-12 of its width, for EL/TEL; estimate -/+ cap * width for AEL/TAEL.
std::pair<double, double> search_domain(const StatisticProfile& profile,
                                        const InversionOptions& options = {});

/// {theta : scaled statistic <= chi2_crit}, searched outward from the estimate.
///
/// Endpoints that never cross the threshold inside the search domain are
/// reported at the domain boundary with the matching `*_bracketed` flag false.
/// Throws DegenerateVariance when the scale factor is undefined.
ConfidenceInterval invert(VariantKind kind, const Sample& s, OrdinateQuery q,
                          const SignificanceLevel& level, const InversionOptions& options = {});

/// Throws BracketFailure if either endpoint is unbracketed.
void require_bracketed(const ConfidenceInterval& ci);

double interval_length(const ConfidenceInterval& ci);

}  // namespace lorenz
