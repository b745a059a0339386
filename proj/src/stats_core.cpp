#include "basket/stats_core.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace basket {

void GammaMixtureHyper::validate() const {
    if (!(a1 > 0.0 && b1 > 0.0 && a2 > 0.0 && b2 > 0.0)) {
        throw std::domain_error("hyper: a1, b1, a2, b2 must be positive");
    }
    if (!(a1 > 1.0 && a2 > 1.0)) {
        throw std::domain_error("hyper: a1 and a2 must exceed 1 for a finite prior variance");
    }
}

double NormalSummary::sd() const { return std::sqrt(variance); }

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("std_normal_quantile: p must lie in (0, 1), got " +
                                std::to_string(p));
    }
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double moment_matched_prior_variance(double w, const GammaMixtureHyper& hyper) {
    hyper.validate();
    if (!(w >= 0.0 && w <= 1.0)) {
        throw std::domain_error("moment_matched_prior_variance: w must lie in [0, 1]");
    }
    return w * hyper.b1 / (hyper.a1 - 1.0) + (1.0 - w) * hyper.b2 / (hyper.a2 - 1.0);
}

double hellinger_weight(double mu_q, double sigma_q, double mu_k, double sigma_k) {
    if (!(sigma_q > 0.0 && sigma_k > 0.0)) {
        throw std::domain_error("hellinger_weight: standard deviations must be positive");
    }
    const double var_sum = sigma_q * sigma_q + sigma_k * sigma_k;
    const double diff = mu_q - mu_k;
    const double affinity =
        std::sqrt(2.0 * sigma_q * sigma_k / var_sum) * std::exp(-diff * diff / (4.0 * var_sum));
    // affinity can exceed 1 by an ulp for identical inputs
    return std::sqrt(std::max(0.0, 1.0 - affinity));
}

double gamma_mixture_cdf(double x, double w, const GammaMixtureHyper& hyper) {
    if (x <= 0.0) {
        return 0.0;
    }
    double cdf = 0.0;
    if (w > 0.0) {
        cdf += w * boost::math::gamma_p(hyper.a1, hyper.b1 * x);
    }
    if (w < 1.0) {
        cdf += (1.0 - w) * boost::math::gamma_p(hyper.a2, hyper.b2 * x);
    }
    return cdf;
}

namespace {

double mixture_quantile(double p, double w, const GammaMixtureHyper& hyper, double scale) {
    double lo = 0.0;
    double hi = scale;
    while (gamma_mixture_cdf(hi, w, hyper) < p) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) {
            throw std::runtime_error("mixture_quantile: bracket expansion overflowed");
        }
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gamma_mixture_cdf(mid, w, hyper) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

MixtureInterval gamma_mixture_mean_and_interval(double w, const GammaMixtureHyper& hyper,
                                                double level) {
    hyper.validate();
    if (!(w >= 0.0 && w <= 1.0)) {
        throw std::domain_error("gamma_mixture_mean_and_interval: w must lie in [0, 1]");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::domain_error("gamma_mixture_mean_and_interval: level must lie in (0, 1)");
    }
    const double mean = w * hyper.a1 / hyper.b1 + (1.0 - w) * hyper.a2 / hyper.b2;
    const double tail = 0.5 * (1.0 - level);
    return {mean, mixture_quantile(tail, w, hyper, mean), mixture_quantile(1.0 - tail, w, hyper, mean)};
}

}  // namespace basket
