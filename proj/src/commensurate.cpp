#include "basket/commensurate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace basket {

WeightMatrix::WeightMatrix(std::size_t K, std::vector<double> entries)
    : K_(K), entries_(std::move(entries)) {
    if (entries_.size() != K_ * K_) {
        throw std::invalid_argument("weights: expected " + std::to_string(K_ * K_) +
                                    " entries, got " + std::to_string(entries_.size()));
    }
    for (std::size_t q = 0; q < K_; ++q) {
        if ((*this)(q, q) != 0.0) {
            throw std::invalid_argument("weights: diagonal entry (" + std::to_string(q) + "," +
                                        std::to_string(q) + ") must be 0");
        }
        for (std::size_t k = 0; k < K_; ++k) {
            const double w = (*this)(q, k);
            if (!(w >= 0.0 && w <= 1.0)) {
                throw std::invalid_argument("weights: entry (" + std::to_string(q) + "," +
                                            std::to_string(k) + ") outside [0, 1]");
            }
            if (w != (*this)(k, q)) {
                throw std::invalid_argument("weights: matrix is not symmetric at (" +
                                            std::to_string(q) + "," + std::to_string(k) + ")");
            }
        }
    }
}

WeightMatrix WeightMatrix::uniform(std::size_t K, double w) {
    std::vector<double> e(K * K, w);
    for (std::size_t i = 0; i < K; ++i) {
        e[i * K + i] = 0.0;
    }
    return WeightMatrix(K, std::move(e));
}

WeightMatrix WeightMatrix::from_hellinger(std::span<const double> means,
                                          std::span<const double> sds) {
    if (means.size() != sds.size()) {
        throw std::invalid_argument("weights: arm_means and arm_sds lengths differ");
    }
    const std::size_t K = means.size();
    std::vector<double> e(K * K, 0.0);
    for (std::size_t q = 0; q < K; ++q) {
        for (std::size_t k = q + 1; k < K; ++k) {
            const double w = hellinger_weight(means[q], sds[q], means[k], sds[k]);
            e[q * K + k] = w;
            e[k * K + q] = w;
        }
    }
    return WeightMatrix(K, std::move(e));
}

WeightMatrix WeightMatrix::permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != K_) {
        throw std::invalid_argument("weights: permutation length mismatch");
    }
    std::vector<double> e(K_ * K_);
    for (std::size_t i = 0; i < K_; ++i) {
        for (std::size_t j = 0; j < K_; ++j) {
            e[i * K_ + j] = (*this)(perm[i], perm[j]);
        }
    }
    return WeightMatrix(K_, std::move(e));
}

WeightMatrix WeightMatrix::scaled(double factor) const {
    std::vector<double> e = entries_;
    for (double& v : e) {
        v *= factor;
    }
    return WeightMatrix(K_, std::move(e));
}

void SubtrialDesign::validate() const {
    if (!(sigma2 > 0.0)) {
        throw std::invalid_argument("sigma2 must be positive");
    }
    if (!(R > 0.0 && R < 1.0)) {
        throw std::invalid_argument("R must lie in (0, 1)");
    }
    if (!(s02 > 0.0)) {
        throw std::invalid_argument("s02 must be positive");
    }
    if (!std::isfinite(m0)) {
        throw std::invalid_argument("m0 must be finite");
    }
}

void BasketDesign::validate() const {
    if (subtrials.size() < 2) {
        throw std::invalid_argument("subtrials: at least 2 required");
    }
    if (weights.size() != subtrials.size()) {
        throw std::invalid_argument("weights: dimension " + std::to_string(weights.size()) +
                                    " does not match " + std::to_string(subtrials.size()) +
                                    " subtrials");
    }
    if (!(c0 > 0.0)) {
        throw std::invalid_argument("c0: must be positive");
    }
    try {
        hyper.validate();
    } catch (const std::domain_error& e) {
        throw std::invalid_argument(e.what());
    }
    // w semantics: w -> 1 means substantial discounting, so component 1 must
    // carry the larger prior variance.
    if (!(hyper.b1 / (hyper.a1 - 1.0) > hyper.b2 / (hyper.a2 - 1.0))) {
        throw std::invalid_argument(
            "hyper: b1/(a1-1) must exceed b2/(a2-1) (component 1 is the discounting component)");
    }
    for (std::size_t k = 0; k < subtrials.size(); ++k) {
        try {
            subtrials[k].validate();
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("subtrials[" + std::to_string(k) + "]: " + e.what());
        }
    }
}

std::vector<double> synthesis_weights(const WeightMatrix& weights, double c0, std::size_t k) {
    if (!(c0 > 0.0)) {
        throw std::domain_error("synthesis_weights: c0 must be positive");
    }
    const std::size_t K = weights.size();
    if (K < 2 || k >= K) {
        throw std::out_of_range("synthesis_weights: subtrial index out of range");
    }
    // shift by the smallest exponent so small c0 cannot underflow every term
    double min_sq = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < K; ++q) {
        if (q != k) {
            min_sq = std::min(min_sq, weights(q, k) * weights(q, k));
        }
    }
    std::vector<double> p;
    p.reserve(K - 1);
    double total = 0.0;
    for (std::size_t q = 0; q < K; ++q) {
        if (q == k) {
            continue;
        }
        const double w = weights(q, k);
        p.push_back(std::exp(-(w * w - min_sq) / c0));
        total += p.back();
    }
    for (double& v : p) {
        v /= total;
    }
    return p;
}

double commensurate_prior_variance(const BasketDesign& design, double n_q, std::size_t q,
                                   std::size_t k) {
    if (q == k) {
        throw std::out_of_range("commensurate_prior_variance: q must differ from k");
    }
    if (q >= design.size() || k >= design.size()) {
        throw std::out_of_range("commensurate_prior_variance: index out of range");
    }
    const SubtrialDesign& sub = design.subtrials[q];
    const double posterior_var = 1.0 / (1.0 / sub.s02 + sub.data_precision(n_q));
    return posterior_var + moment_matched_prior_variance(design.weights(q, k), design.hyper);
}

NormalSummary complementary_posterior(const SubtrialDesign& sub, double n_q, double xbar_diff) {
    if (n_q == 0.0) {
        return {sub.m0, sub.s02};
    }
    const double info = n_q * sub.R * (1.0 - sub.R);
    const double mean = sub.m0 / (1.0 + (sub.s02 / sub.sigma2) * info) +
                        xbar_diff / (1.0 + (sub.sigma2 / sub.s02) / info);
    return {mean, 1.0 / (1.0 / sub.s02 + info / sub.sigma2)};
}

NormalSummary collective_prior(const BasketDesign& design, std::span<const double> n,
                               std::span<const double> lambdas, std::size_t k) {
    const std::size_t K = design.size();
    if (n.size() != K || lambdas.size() != K) {
        throw std::invalid_argument("collective_prior: n and lambdas must have K entries");
    }
    const std::vector<double> p = synthesis_weights(design.weights, design.c0, k);
    double mean = 0.0;
    double variance = 0.0;
    std::size_t j = 0;
    for (std::size_t q = 0; q < K; ++q) {
        if (q == k) {
            continue;
        }
        mean += p[j] * lambdas[q];
        variance += p[j] * p[j] * commensurate_prior_variance(design, n[q], q, k);
        ++j;
    }
    return {mean, variance};
}

NormalSummary update_with_data(const NormalSummary& prior, double data_variance,
                               double xbar_diff) {
    const double mean = (data_variance * prior.mean + xbar_diff * prior.variance) /
                        (prior.variance + data_variance);
    return {mean, 1.0 / (1.0 / prior.variance + 1.0 / data_variance)};
}

NormalSummary full_posterior(const BasketDesign& design, std::span<const double> n, std::size_t k,
                             double xbar_diff_k, std::span<const double> lambdas) {
    if (k >= design.size() || n.size() != design.size()) {
        throw std::out_of_range("full_posterior: index out of range");
    }
    if (!(n[k] > 0.0)) {
        throw std::domain_error("full_posterior: n_k must be positive");
    }
    const NormalSummary prior = collective_prior(design, n, lambdas, k);
    const double data_variance = 1.0 / design.subtrials[k].data_precision(n[k]);
    return update_with_data(prior, data_variance, xbar_diff_k);
}

}  // namespace basket
