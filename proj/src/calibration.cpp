#include "lorenz_el/calibration.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lorenz_el/el_variants.hpp"
#include "lorenz_el/errors.hpp"

namespace lorenz {

namespace {

double population_variance(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size());
}

}  // namespace

ScaleFactor scale_factor(const Sample& s, OrdinateQuery q) {
    const double psi = sample_quantile(s, q);
    std::vector<double> p(s.size());
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const bool below = s[i] <= psi;
        p[i] = below ? s[i] : 0.0;
        v[i] = below ? s[i] - psi : 0.0;
    }
    ScaleFactor sf;
    sf.sigma_p_sq = population_variance(p);
    sf.sigma_v_sq = population_variance(v);
    if (!(sf.sigma_v_sq > 0.0)) {
        throw DegenerateVariance("variance of (X - psi) 1(X <= psi) is zero at t = " +
                                 std::to_string(q.t()));
    }
    sf.ratio = sf.sigma_p_sq / sf.sigma_v_sq;
    return sf;
}

// Acklam's rational approximation followed by one Halley step on erfc.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    // Upper half by reflection; 1 - p is exact for p >= 0.5.
    if (p > 0.5) return -normal_quantile(1.0 - p);

    double x;
    if (p < p_low) {
        const double r = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
            ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
    } else {
        const double r0 = p - 0.5;
        const double r = r0 * r0;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * r0 /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }

    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double chi2_crit(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    const double z = normal_quantile(0.5 * alpha);
    return z * z;
}

SignificanceLevel::SignificanceLevel(double alpha) : alpha_(alpha), crit_(lorenz::chi2_crit(alpha)) {}

double scaled_statistic(VariantKind kind, const Sample& s, OrdinateQuery q, double theta) {
    const ScaleFactor sf = scale_factor(s, q);
    return sf.ratio * log_ratio(kind, s, q, theta).value;
}

}  // namespace lorenz
