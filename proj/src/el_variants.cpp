#include "lorenz_el/el_variants.hpp"

#include <algorithm>
#include <cmath>

#include "lorenz_el/errors.hpp"

namespace lorenz {

AdjustmentFactor::AdjustmentFactor(std::size_t n) {
    if (n == 0) throw DomainError("adjustment factor needs n >= 1");
    value_ = std::max(1.0, 0.5 * std::log(static_cast<double>(n)));
}

TelParameter::TelParameter(double gamma) : gamma_(gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
}

std::vector<double> ael_augment(std::span<const double> w, AdjustmentFactor a) {
    if (w.empty()) throw DomainError("ael_augment: empty deviation vector");
    double sum = 0.0;
    for (double wi : w) sum += wi;
    const double mean = sum / static_cast<double>(w.size());
    std::vector<double> out(w.begin(), w.end());
    out.push_back(-a.value() * mean);
    return out;
}

double tel_transform(double l, std::size_t n, TelParameter p) {
    if (n == 0) throw DomainError("tel_transform needs n >= 1");
    return l * std::max(1.0 - l / static_cast<double>(n), 1.0 - p.gamma());
}

double log_ratio_from_truncated(VariantKind kind, std::span<const double> truncated,
                                double theta, std::vector<double>& scratch,
                                double* lambda_hint) {
    const std::size_t n = truncated.size();
    scratch.resize(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        scratch[i] = truncated[i] - theta;
        sum += scratch[i];
    }
    if (is_adjusted(kind)) {
        scratch.push_back(-AdjustmentFactor(n).value() * (sum / static_cast<double>(n)));
    }
    const double hint = lambda_hint != nullptr ? *lambda_hint : 0.0;
    const double l = log_ratio_from_deviations(scratch, lambda_hint, hint);
    return is_transformed(kind) ? tel_transform(l, n) : l;
}

namespace {

LogRatioValue evaluate(VariantKind kind, const Sample& s, OrdinateQuery q, double theta) {
    const std::vector<double> v = truncated_values(s, q);
    std::vector<double> scratch;
    return {log_ratio_from_truncated(kind, v, theta, scratch), kind};
}

}  // namespace

LogRatioValue log_ael_ratio(const Sample& s, OrdinateQuery q, double theta) {
    return evaluate(VariantKind::AEL, s, q, theta);
}

LogRatioValue log_tel_ratio(const Sample& s, OrdinateQuery q, double theta) {
    return evaluate(VariantKind::TEL, s, q, theta);
}

LogRatioValue log_tael_ratio(const Sample& s, OrdinateQuery q, double theta) {
    return evaluate(VariantKind::TAEL, s, q, theta);
}

LogRatioValue log_ratio(VariantKind kind, const Sample& s, OrdinateQuery q, double theta) {
    switch (kind) {
        case VariantKind::EL: return log_el_ratio(s, q, theta);
        case VariantKind::AEL: return log_ael_ratio(s, q, theta);
        case VariantKind::TEL: return log_tel_ratio(s, q, theta);
        case VariantKind::TAEL: return log_tael_ratio(s, q, theta);
    }
    throw DomainError("unknown variant");
}

}  // namespace lorenz
