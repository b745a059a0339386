#ifndef BASKET_COMMENSURATE_HPP
#define BASKET_COMMENSURATE_HPP

#include "basket/stats_core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace basket {

/// Symmetric K x K matrix of pairwise incommensurability levels w_qk with a
/// zero diagonal. Row q, column k. Construction rejects asymmetric input.
class WeightMatrix {
public:
    WeightMatrix() : K_(0) {}

    /// `entries` is row-major with size K * K.
    WeightMatrix(std::size_t K, std::vector<double> entries);

    /// All off-diagonal entries equal to `w`.
    static WeightMatrix uniform(std::size_t K, double w);

    /// Pairwise Hellinger distances between N(means[k], sds[k]^2).
    static WeightMatrix from_hellinger(std::span<const double> means, std::span<const double> sds);

    std::size_t size() const { return K_; }
    double operator()(std::size_t q, std::size_t k) const { return entries_[q * K_ + k]; }
    const std::vector<double>& entries() const { return entries_; }

    /// Consistent relabelling: result(i, j) = (*this)(perm[i], perm[j]).
    WeightMatrix permuted(std::span<const std::size_t> perm) const;
    WeightMatrix scaled(double factor) const;

private:
    std::size_t K_;
    std::vector<double> entries_;
};

struct SubtrialDesign {
    double sigma2;  ///< known outcome variance
    double R;       ///< probability of allocation to the experimental arm
    double m0;      ///< operational prior mean
    double s02;     ///< operational prior variance

    void validate() const;

    /// n R (1 - R) / sigma^2: precision contributed by n patients.
    double data_precision(double n) const { return n * R * (1.0 - R) / sigma2; }
};

struct BasketDesign {
    std::vector<SubtrialDesign> subtrials;
    WeightMatrix weights;
    GammaMixtureHyper hyper;
    double c0;

    std::size_t size() const { return subtrials.size(); }

    /// Checks K >= 2, matching weight dimensions, c0 > 0, valid hyper with
    /// b1/(a1-1) > b2/(a2-1), and every subtrial. Throws std::invalid_argument.
    void validate() const;
};

/// p_qk for q != k, in ascending q order (K - 1 entries).
std::vector<double> synthesis_weights(const WeightMatrix& weights, double c0, std::size_t k);

/// xi_qk^2: posterior variance of theta_q from n_q patients plus the
/// moment-matched commensurate variance for w_qk.
double commensurate_prior_variance(const BasketDesign& design, double n_q, std::size_t q,
                                   std::size_t k);

/// Posterior of theta_q from its own data under the operational prior.
NormalSummary complementary_posterior(const SubtrialDesign& sub, double n_q, double xbar_diff);

/// Collective commensurate prior for theta_k built from all q != k.
/// `n` and `lambdas` have K entries; entry k is ignored.
NormalSummary collective_prior(const BasketDesign& design, std::span<const double> n,
                               std::span<const double> lambdas, std::size_t k);

/// Conjugate update of a normal prior by a sample-mean difference whose
/// sampling variance is `data_variance`.
NormalSummary update_with_data(const NormalSummary& prior, double data_variance,
                               double xbar_diff);

/// Posterior of theta_k given its own data and the collective prior.
/// Throws std::domain_error when n[k] == 0.
NormalSummary full_posterior(const BasketDesign& design, std::span<const double> n, std::size_t k,
                             double xbar_diff_k, std::span<const double> lambdas);

}  // namespace basket

#endif  // BASKET_COMMENSURATE_HPP
