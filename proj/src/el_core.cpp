#include "lorenz_el/el_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "lorenz_el/errors.hpp"

namespace lorenz {

std::optional<VariantKind> parse_variant(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "el") return VariantKind::EL;
    if (lower == "ael") return VariantKind::AEL;
    if (lower == "tel") return VariantKind::TEL;
    if (lower == "tael") return VariantKind::TAEL;
    return std::nullopt;
}

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw DomainError("a sample needs at least two observations, got " +
                          std::to_string(values_.size()));
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw DomainError("sample contains a non-finite value");
    }
    std::sort(values_.begin(), values_.end());
}

double Sample::mean() const noexcept {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum / static_cast<double>(values_.size());
}

Sample Sample::scaled(double c) const {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scale factor must be positive");
    std::vector<double> out(values_);
    for (double& v : out) v *= c;
    return Sample(std::move(out));
}

OrdinateQuery::OrdinateQuery(double t) : t_(t) {
    if (!(t > 0.0 && t < 1.0)) {
        throw DomainError("ordinate position t must lie in (0, 1), got " + std::to_string(t));
    }
}

std::size_t quantile_rank(std::size_t n, double t) {
    const double nt = static_cast<double>(n) * t;
    auto k = static_cast<std::size_t>(std::ceil(nt - 1e-9));
    return std::clamp<std::size_t>(k, 1, n);
}

double sample_quantile(const Sample& s, OrdinateQuery q) {
    return s[quantile_rank(s.size(), q.t()) - 1];
}

std::vector<double> truncated_values(const Sample& s, OrdinateQuery q) {
    const double psi = sample_quantile(s, q);
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = s[i] <= psi ? s[i] : 0.0;
    return v;
}

double point_estimate(const Sample& s, OrdinateQuery q) {
    const double psi = sample_quantile(s, q);
    double sum = 0.0;
    for (double x : s.values()) {
        if (x <= psi) sum += x;
    }
    return sum / static_cast<double>(s.size());
}

EstimatingValues estimating_values(const Sample& s, OrdinateQuery q, double theta) {
    EstimatingValues ev;
    ev.quantile = sample_quantile(s, q);
    ev.truncated = truncated_values(s, q);
    ev.theta = theta;
    ev.deviations.resize(ev.truncated.size());
    for (std::size_t i = 0; i < ev.truncated.size(); ++i) {
        ev.deviations[i] = ev.truncated[i] - theta;
    }
    return ev;
}

namespace {

constexpr int kMaxIterations = 200;

struct Moments {
    double g = 0.0;   // mean of w / (1 + lambda w)
    double dg = 0.0;  // derivative in lambda
};

Moments estimating_moments(std::span<const double> w, double lambda) {
    Moments m;
    for (double wi : w) {
        const double r = wi / (1.0 + lambda * wi);
        m.g += r;
        m.dg -= r * r;
    }
    const auto n = static_cast<double>(w.size());
    m.g /= n;
    m.dg /= n;
    return m;
}

}  // namespace

LagrangeSolution solve_lambda(std::span<const double> w, double initial_lambda) {
    if (w.empty()) throw DomainError("solve_lambda: empty deviation vector");
    double wmin = std::numeric_limits<double>::infinity();
    double wmax = -wmin;
    for (double wi : w) {
        if (!std::isfinite(wi)) throw NonFinite("solve_lambda: non-finite deviation");
        wmin = std::min(wmin, wi);
        wmax = std::max(wmax, wi);
    }

    LagrangeSolution sol;
    const auto n = static_cast<double>(w.size());
    if (wmin == 0.0 && wmax == 0.0) {
        sol.weights.assign(w.size(), 1.0 / n);
        return sol;
    }
    if (!(wmax > 0.0 && wmin < 0.0)) {
        throw ConvexHullViolation("zero is not inside the convex hull of the estimating values");
    }

    double lo = -1.0 / wmax;
    double hi = -1.0 / wmin;
    const double pad = 1e-12 * (hi - lo);
    lo += pad;
    hi -= pad;
    const double initial_width = hi - lo;
    const double lambda_scale = 1.0 / std::max(wmax, -wmin);
    constexpr double eps = std::numeric_limits<double>::epsilon();

    double lambda = (initial_lambda > lo && initial_lambda < hi) ? initial_lambda : 0.0;
    for (int it = 0; it < kMaxIterations; ++it) {
        ++sol.iterations;
        const Moments m = estimating_moments(w, lambda);
        if (m.g == 0.0) break;
        // g is strictly decreasing, so its sign says which side the root is on.
        if (m.g > 0.0) lo = lambda; else hi = lambda;
        double next = lambda - m.g / m.dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = next - lambda;
        lambda = next;
        if (std::abs(step) <= 4.0 * eps * std::max(std::abs(lambda), lambda_scale) ||
            hi - lo <= 1e-14 * initial_width) {
            break;
        }
    }

    sol.lambda = lambda;
    sol.weights.resize(w.size());
    double g = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double denom = 1.0 + lambda * w[i];
        sol.weights[i] = 1.0 / (n * denom);
        g += w[i] / denom;
    }
    sol.residual = g / n;
    if (!std::isfinite(sol.residual)) throw NonFinite("solve_lambda: non-finite residual");
    return sol;
}

double log_ratio_from_deviations(std::span<const double> w, double* lambda_out,
                                 double initial_lambda) {
    const LagrangeSolution sol = solve_lambda(w, initial_lambda);
    double sum = 0.0;
    for (double wi : w) sum += std::log1p(sol.lambda * wi);
    if (lambda_out != nullptr) *lambda_out = sol.lambda;
    const double value = 2.0 * sum;
    if (!std::isfinite(value)) throw NonFinite("log-likelihood ratio overflowed");
    // Exact optimum is >= 0; rounding can leave a tiny negative.
    return std::max(0.0, value);
}

LogRatioValue log_el_ratio(const Sample& s, OrdinateQuery q, double theta) {
    const EstimatingValues ev = estimating_values(s, q, theta);
    return {log_ratio_from_deviations(ev.deviations), VariantKind::EL};
}

}  // namespace lorenz
