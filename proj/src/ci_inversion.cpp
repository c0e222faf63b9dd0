#include "lorenz_el/ci_inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lorenz_el/el_variants.hpp"
#include "lorenz_el/errors.hpp"

namespace lorenz {

StatisticProfile::StatisticProfile(VariantKind kind, const Sample& s, OrdinateQuery q)
    : kind_(kind),
      truncated_(truncated_values(s, q)),
      scale_(scale_factor(s, q)),
      estimate_(point_estimate(s, q)) {
    const auto [lo, hi] = std::minmax_element(truncated_.begin(), truncated_.end());
    vmin_ = *lo;
    vmax_ = *hi;
}

double StatisticProfile::operator()(double theta) const {
    if (!is_adjusted(kind_) && !(theta > vmin_ && theta < vmax_)) {
        return std::numeric_limits<double>::infinity();
    }
    try {
        return scale_.ratio *
               log_ratio_from_truncated(kind_, truncated_, theta, scratch_, &lambda_hint_);
    } catch (const ConvexHullViolation&) {
        lambda_hint_ = 0.0;
        return std::numeric_limits<double>::infinity();
    }
}

std::pair<double, double> search_domain(const StatisticProfile& profile,
                                        const InversionOptions& options) {
    const double width = profile.hull_max() - profile.hull_min();
    if (is_adjusted(profile.kind())) {
        const double reach = options.adjusted_search_cap * width;
        return {profile.estimate() - reach, profile.estimate() + reach};
    }
    const double pad = 1e-12 * width;
    return {profile.hull_min() + pad, profile.hull_max() - pad};
}

namespace {

struct SideResult {
    double endpoint = 0.0;
    bool bracketed = false;
    bool fallback = false;
    std::size_t evaluations = 0;
};

class SideSearch {
public:
    SideSearch(const StatisticProfile& stat, double crit, double limit, double tolerance,
               std::size_t grid)
        : stat_(stat), crit_(crit), limit_(limit), tol_(tolerance), grid_(grid) {}

    SideResult run(bool force_grid) {
        if (force_grid) return grid_fallback();
        const double theta_hat = stat_.estimate();
        double inner = theta_hat;
        double s_inner = 0.0;
        double outer = limit_;
        double s_outer = 0.0;

        if (!is_adjusted(stat_.kind())) {
            s_outer = eval(limit_);
            if (s_outer <= crit_) return finish(limit_, false);
        } else {
            // Expand outward: the hull boundary first, then doubling steps.
            const double dir = limit_ > theta_hat ? 1.0 : -1.0;
            const double max_reach = std::abs(limit_ - theta_hat);
            const double boundary = dir > 0 ? stat_.hull_max() : stat_.hull_min();
            double reach = std::max(std::abs(boundary - theta_hat), tol_);
            while (true) {
                const double x = theta_hat + dir * std::min(reach, max_reach);
                const double sx = eval(x);
                if (sx > crit_) {
                    outer = x;
                    s_outer = sx;
                    break;
                }
                if (sx < s_inner - slack()) return grid_fallback();
                inner = x;
                s_inner = sx;
                if (reach >= max_reach) return finish(limit_, false);
                reach *= 2.0;
            }
        }

        while (std::abs(outer - inner) > tol_) {
            const double mid = 0.5 * (inner + outer);
            const double sm = eval(mid);
            if (sm < s_inner - slack() || sm > s_outer + slack()) return grid_fallback();
            if (sm <= crit_) {
                inner = mid;
                s_inner = sm;
            } else {
                outer = mid;
                s_outer = sm;
            }
        }
        return finish(0.5 * (inner + outer), true);
    }

private:
    double eval(double theta) {
        ++evaluations_;
        return stat_(theta);
    }

    double slack() const { return 1e-10 * crit_; }

    SideResult finish(double endpoint, bool bracketed) const {
        return {endpoint, bracketed, fallback_, evaluations_};
    }

    // Outermost grid point inside the sub-level set, then bisection towards
    // the next grid point without the monotonicity check.
    SideResult grid_fallback() {
        fallback_ = true;
        const double theta_hat = stat_.estimate();
        const double span = limit_ - theta_hat;
        std::size_t last_inside = 0;
        for (std::size_t j = 1; j <= grid_; ++j) {
            const double x = theta_hat + span * static_cast<double>(j) / static_cast<double>(grid_);
            if (eval(x) <= crit_) last_inside = j;
        }
        if (last_inside == grid_) return finish(limit_, false);
        double inner = theta_hat + span * static_cast<double>(last_inside) / static_cast<double>(grid_);
        double outer = theta_hat + span * static_cast<double>(last_inside + 1) / static_cast<double>(grid_);
        while (std::abs(outer - inner) > tol_) {
            const double mid = 0.5 * (inner + outer);
            if (eval(mid) <= crit_) inner = mid; else outer = mid;
        }
        return finish(0.5 * (inner + outer), true);
    }

    const StatisticProfile& stat_;
    double crit_;
    double limit_;
    double tol_;
    std::size_t grid_;
    std::size_t evaluations_ = 0;
    bool fallback_ = false;
};

}  // namespace

ConfidenceInterval invert(VariantKind kind, const Sample& s, OrdinateQuery q,
                          const SignificanceLevel& level, const InversionOptions& options) {
    const StatisticProfile stat(kind, s, q);
    const auto [lo_limit, hi_limit] = search_domain(stat, options);
    const double width = stat.hull_max() - stat.hull_min();
    const double tol = options.relative_tolerance * std::max(std::abs(stat.estimate()), width);
    const double crit = level.chi2_crit();

    const SideResult lower = SideSearch(stat, crit, lo_limit, tol, options.fallback_grid).run(options.force_grid);
    const SideResult upper = SideSearch(stat, crit, hi_limit, tol, options.fallback_grid).run(options.force_grid);

    ConfidenceInterval ci;
    ci.lower = std::min(lower.endpoint, stat.estimate());
    ci.upper = std::max(upper.endpoint, stat.estimate());
    ci.estimate = stat.estimate();
    ci.level = level.confidence();
    ci.kind = kind;
    ci.iterations = lower.evaluations + upper.evaluations;
    ci.lower_bracketed = lower.bracketed;
    ci.upper_bracketed = upper.bracketed;
    ci.fallback_used = lower.fallback || upper.fallback;
    return ci;
}

void require_bracketed(const ConfidenceInterval& ci) {
    if (ci.bracketed()) return;
    throw BracketFailure(std::string(to_string(ci.kind)) +
                         " statistic never crosses the critical value on the " +
                         (ci.lower_bracketed ? "upper" : "lower") + " side");
}

double interval_length(const ConfidenceInterval& ci) { return ci.upper - ci.lower; }

}  // namespace lorenz
