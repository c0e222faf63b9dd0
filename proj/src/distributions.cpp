#include "lorenz_el/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/skew_normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "lorenz_el/errors.hpp"

namespace lorenz {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double skew_delta(const SkewNormal& p) { return p.shape / std::sqrt(1.0 + p.shape * p.shape); }

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

Population::Population(Params params) : params_(params) {
    std::visit(overloaded{
                   [](const Weibull& p) {
                       if (!(p.shape > 0.0 && p.scale > 0.0))
                           throw DomainError("Weibull shape and scale must be positive");
                   },
                   [](const ChiSquare& p) {
                       if (!(p.df > 0.0)) throw DomainError("chi-square df must be positive");
                   },
                   [](const SkewNormal& p) {
                       if (!(p.scale > 0.0) || !std::isfinite(p.location) || !std::isfinite(p.shape))
                           throw DomainError("skew-normal scale must be positive");
                   },
               },
               params_);
}

std::string Population::name() const {
    return std::visit(
        overloaded{
            [](const Weibull& p) { return "weibull(" + fmt_num(p.shape) + "," + fmt_num(p.scale) + ")"; },
            [](const ChiSquare& p) { return "chisq(" + fmt_num(p.df) + ")"; },
            [](const SkewNormal& p) {
                return "skewnormal(" + fmt_num(p.location) + "," + fmt_num(p.scale) + "," +
                       fmt_num(p.shape) + ")";
            },
        },
        params_);
}

double Population::mean() const {
    return std::visit(
        overloaded{
            [](const Weibull& p) { return p.scale * std::tgamma(1.0 + 1.0 / p.shape); },
            [](const ChiSquare& p) { return p.df; },
            [](const SkewNormal& p) {
                return p.location + p.scale * skew_delta(p) * std::sqrt(2.0 / std::numbers::pi);
            },
        },
        params_);
}

double Population::variance() const {
    return std::visit(
        overloaded{
            [](const Weibull& p) {
                const double g1 = std::tgamma(1.0 + 1.0 / p.shape);
                return p.scale * p.scale * (std::tgamma(1.0 + 2.0 / p.shape) - g1 * g1);
            },
            [](const ChiSquare& p) { return 2.0 * p.df; },
            [](const SkewNormal& p) {
                const double d = skew_delta(p);
                return p.scale * p.scale * (1.0 - 2.0 * d * d / std::numbers::pi);
            },
        },
        params_);
}

double Population::pdf(double x) const {
    return std::visit(
        overloaded{
            [x](const Weibull& p) {
                if (x < 0.0) return 0.0;
                if (x == 0.0) {
                    if (p.shape < 1.0) return std::numeric_limits<double>::infinity();
                    return p.shape == 1.0 ? 1.0 / p.scale : 0.0;
                }
                const double z = x / p.scale;
                return (p.shape / p.scale) * std::pow(z, p.shape - 1.0) * std::exp(-std::pow(z, p.shape));
            },
            [x](const ChiSquare& p) {
                if (x <= 0.0) return 0.0;
                return boost::math::pdf(boost::math::chi_squared_distribution<double>(p.df), x);
            },
            [x](const SkewNormal& p) {
                return boost::math::pdf(
                    boost::math::skew_normal_distribution<double>(p.location, p.scale, p.shape), x);
            },
        },
        params_);
}

double Population::cdf(double x) const {
    return std::visit(
        overloaded{
            [x](const Weibull& p) {
                if (x <= 0.0) return 0.0;
                return -std::expm1(-std::pow(x / p.scale, p.shape));
            },
            [x](const ChiSquare& p) {
                if (x <= 0.0) return 0.0;
                return boost::math::gamma_p(0.5 * p.df, 0.5 * x);
            },
            [x](const SkewNormal& p) {
                if (x == -std::numeric_limits<double>::infinity()) return 0.0;
                return boost::math::cdf(
                    boost::math::skew_normal_distribution<double>(p.location, p.scale, p.shape), x);
            },
        },
        params_);
}

double Population::support_min() const {
    return std::holds_alternative<SkewNormal>(params_) ? -std::numeric_limits<double>::infinity()
                                                        : 0.0;
}

double Population::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
    if (const auto* w = std::get_if<Weibull>(&params_)) {
        return w->scale * std::pow(-std::log1p(-p), 1.0 / w->shape);
    }
    const double sd = std::sqrt(variance());
    double lo = support_min();
    if (!std::isfinite(lo)) {
        double reach = sd;
        lo = mean() - reach;
        while (cdf(lo) >= p) {
            reach *= 2.0;
            lo = mean() - reach;
        }
    }
    double reach = sd;
    double hi = mean() + reach;
    while (cdf(hi) < p) {
        reach *= 2.0;
        hi = mean() + reach;
    }
    while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cdf(mid) >= p) hi = mid; else lo = mid;
    }
    return hi;
}

Population Population::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    std::string family = spec.substr(0, colon);
    std::transform(family.begin(), family.end(), family.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                args.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw DomainError("bad population parameter '" + item + "' in '" + spec + "'");
            }
        }
    }
    auto want = [&](std::size_t count) {
        if (args.size() != count) {
            throw DomainError("population '" + family + "' takes " + std::to_string(count) +
                              " parameter(s): '" + spec + "'");
        }
    };
    if (family == "weibull") {
        want(2);
        return Population(Weibull{args[0], args[1]});
    }
    if (family == "chisq" || family == "chi2" || family == "chisquare") {
        want(1);
        return Population(ChiSquare{args[0]});
    }
    if (family == "skewnormal" || family == "sn") {
        want(3);
        return Population(SkewNormal{args[0], args[1], args[2]});
    }
    throw DomainError("unknown population family '" + family + "'");
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t SeedSpec::child_seed() const noexcept {
    return splitmix64(splitmix64(master_seed) ^ ((stream_id + 1) * 0x9E3779B97F4A7C15ULL));
}

Sampler::Sampler(Population pop, SeedSpec seed) : pop_(std::move(pop)), rng_(seed.child_seed()) {}

double Sampler::operator()() {
    return std::visit(
        overloaded{
            [this](const Weibull& p) {
                const double u = 1.0 - uniform_(rng_);  // (0, 1]
                return p.scale * std::pow(-std::log(u), 1.0 / p.shape);
            },
            [this](const ChiSquare& p) {
                if (p.df == std::floor(p.df) && p.df <= 64.0) {
                    double sum = 0.0;
                    for (int i = 0; i < static_cast<int>(p.df); ++i) {
                        const double z = normal_(rng_);
                        sum += z * z;
                    }
                    return sum;
                }
                return std::gamma_distribution<double>(0.5 * p.df, 2.0)(rng_);
            },
            [this](const SkewNormal& p) {
                const double d = skew_delta(p);
                const double z0 = normal_(rng_);
                const double z1 = normal_(rng_);
                return p.location + p.scale * (d * std::abs(z0) + std::sqrt(1.0 - d * d) * z1);
            },
        },
        pop_.params());
}

Sample sample(const Population& pop, std::size_t n, SeedSpec seed) {
    Sampler draw(pop, seed);
    std::vector<double> values(n);
    for (double& v : values) v = draw();
    return Sample(std::move(values));
}

double true_ordinate(const Population& pop, double t) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("true_ordinate: t must lie in (0, 1)");
    const double psi = pop.quantile(t);
    auto integrand = [&pop](double x) { return x * pop.pdf(x); };
    double error = 0.0;
    double l1 = 0.0;
    double value;
    if (std::isinf(pop.support_min())) {
        value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            integrand, pop.support_min(), psi, 20, 1e-13, &error, &l1);
    } else {
        // Tanh-sinh copes with the integrable density singularity at 0
        // (chi-square df < 2, Weibull shape < 1).
        // Integrated over [0, 1] after x = psi u so the error estimate is not
        // dominated by absolute terms when psi is tiny.
        thread_local boost::math::quadrature::tanh_sinh<double> ts;
        value = psi * ts.integrate([&](double u) { return integrand(psi * u); }, 0.0, 1.0, 1e-13,
                                   &error, &l1);
        error *= psi;
        l1 *= psi;
    }
    if (!std::isfinite(value) || error > 1e-10 * std::max(l1, std::numeric_limits<double>::min())) {
        throw QuadratureFailure("generalized Lorenz ordinate quadrature did not converge for " +
                                pop.name());
    }
    return value;
}

}  // namespace lorenz
