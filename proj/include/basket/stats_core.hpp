#ifndef BASKET_STATS_CORE_HPP
#define BASKET_STATS_CORE_HPP

namespace basket {

/// Shape/rate hyperparameters of the two-component Gamma mixture placed on
/// each commensurate precision. Component 1 is the substantial-discounting
/// component (mass on small precisions), component 2 the limited one.
struct GammaMixtureHyper {
    double a1;
    double b1;
    double a2;
    double b2;

    /// Throws std::domain_error unless all values are positive and a1, a2 > 1.
    void validate() const;
};

/// Mean/variance carrier for every normal prior and posterior in the model.
struct NormalSummary {
    double mean;
    double variance;

    double sd() const;
};

double std_normal_cdf(double z);

/// Inverse of the standard normal CDF. Accurate to well below 1e-9.
/// Throws std::domain_error for p outside (0, 1).
double std_normal_quantile(double p);

/// Variance of the normal that matches the first two moments of the
/// scaled-t mixture obtained by integrating the precision out:
/// w * b1 / (a1 - 1) + (1 - w) * b2 / (a2 - 1).
double moment_matched_prior_variance(double w, const GammaMixtureHyper& hyper);

/// Hellinger distance between N(mu_q, sigma_q^2) and N(mu_k, sigma_k^2).
/// Takes standard deviations, not variances.
double hellinger_weight(double mu_q, double sigma_q, double mu_k, double sigma_k);

struct MixtureInterval {
    double mean;
    double lower;
    double upper;
};

/// CDF of w * Gamma(a1, b1) + (1 - w) * Gamma(a2, b2), rate parameterization.
double gamma_mixture_cdf(double x, double w, const GammaMixtureHyper& hyper);

/// Mean and equal-tail `level` interval of the precision mixture.
MixtureInterval gamma_mixture_mean_and_interval(double w, const GammaMixtureHyper& hyper,
                                                double level);

}  // namespace basket

#endif  // BASKET_STATS_CORE_HPP
