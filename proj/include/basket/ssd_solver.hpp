#ifndef BASKET_SSD_SOLVER_HPP
#define BASKET_SSD_SOLVER_HPP

#include "basket/commensurate.hpp"
#include "basket/decision.hpp"
#include "basket/newton.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace basket {

enum class SizingMode { no_borrowing, borrowing };

std::string_view to_string(SizingMode m);

struct SampleSizeSolution {
    SizingMode mode;
    std::vector<double> n_fractional;
    std::vector<long> n_integer;          ///< ceil(n_fractional)
    std::vector<double> residuals;        ///< precision units
    std::vector<bool> prior_sufficient;   ///< constraint already met at n_k = 0
    int iterations = 0;
    bool converged = false;

    double total_fractional() const;
    long total_integer() const;
};

/// Thrown when the borrowing system fails to converge. Carries the last
/// iterate and its residuals.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, std::vector<double> last_iterate,
                        std::vector<double> residuals, int iterations);

    const std::vector<double>& last_iterate() const { return last_iterate_; }
    const std::vector<double>& residuals() const { return residuals_; }
    int iterations() const { return iterations_; }

private:
    std::vector<double> last_iterate_;
    std::vector<double> residuals_;
    int iterations_;
};

/// Posterior precision each subtrial needs: ((z_eta + z_zeta_k) / delta)^2.
std::vector<double> required_precision(const DecisionSpec& spec, std::size_t K);

/// Closed-form stand-alone sizes. Components whose operational prior already
/// meets the requirement are clamped to 0 and flagged.
SampleSizeSolution sample_size_no_borrowing(const BasketDesign& design, const DecisionSpec& spec);

/// Left side minus right side of each borrowing constraint:
/// n_k R_k (1 - R_k) / sigma_k^2 + 1 / sum_q p_qk^2 xi_qk^2(n_q) - required_k.
/// Non-negative entries are satisfied constraints.
std::vector<double> borrowing_constraint(const BasketDesign& design, const DecisionSpec& spec,
                                         std::span<const double> n);

struct BorrowingOptions {
    double tol = 1e-8;
    int max_iter = 100;
    std::optional<std::vector<double>> start;  ///< defaults to the no-borrowing sizes
};

/// Solves all K borrowing constraints simultaneously with damped Newton.
/// Throws NonConvergenceError when the iteration does not converge.
SampleSizeSolution sample_size_borrowing(const BasketDesign& design, const DecisionSpec& spec,
                                         const BorrowingOptions& options = {});

}  // namespace basket

#endif  // BASKET_SSD_SOLVER_HPP
