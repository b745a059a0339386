#include "basket/ssd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace basket {

std::string_view to_string(SizingMode m) {
    return m == SizingMode::borrowing ? "borrowing" : "no_borrowing";
}

double SampleSizeSolution::total_fractional() const {
    return std::accumulate(n_fractional.begin(), n_fractional.end(), 0.0);
}

long SampleSizeSolution::total_integer() const {
    return std::accumulate(n_integer.begin(), n_integer.end(), 0L);
}

NonConvergenceError::NonConvergenceError(const std::string& what, std::vector<double> last_iterate,
                                         std::vector<double> residuals, int iterations)
    : std::runtime_error(what),
      last_iterate_(std::move(last_iterate)),
      residuals_(std::move(residuals)),
      iterations_(iterations) {}

std::vector<double> required_precision(const DecisionSpec& spec, std::size_t K) {
    spec.validate(K);
    const double z_eta = std_normal_quantile(spec.eta);
    std::vector<double> req(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double z = (z_eta + std_normal_quantile(spec.zeta_for(k))) / spec.delta;
        req[k] = z * z;
    }
    return req;
}

namespace {

std::vector<long> ceil_sizes(const std::vector<double>& n) {
    std::vector<long> out(n.size());
    std::transform(n.begin(), n.end(), out.begin(),
                   [](double v) { return static_cast<long>(std::ceil(v)); });
    return out;
}

// Everything in the borrowing constraints that does not depend on n.
struct BorrowingSystem {
    const BasketDesign& design;
    std::vector<double> required;
    std::vector<double> p2;       // K x K, p_qk^2 at (q, k), zero on the diagonal
    std::vector<double> mm_var;   // K x K, moment-matched variance for w_qk

    BorrowingSystem(const BasketDesign& d, const DecisionSpec& spec)
        : design(d), required(required_precision(spec, d.size())) {
        const std::size_t K = d.size();
        p2.assign(K * K, 0.0);
        mm_var.assign(K * K, 0.0);
        for (std::size_t k = 0; k < K; ++k) {
            const std::vector<double> p = synthesis_weights(d.weights, d.c0, k);
            std::size_t j = 0;
            for (std::size_t q = 0; q < K; ++q) {
                if (q == k) {
                    continue;
                }
                p2[q * K + k] = p[j] * p[j];
                mm_var[q * K + k] = moment_matched_prior_variance(d.weights(q, k), d.hyper);
                ++j;
            }
        }
    }

    // 1 / sum_q p_qk^2 xi_qk^2
    double borrowed_precision(std::span<const double> n, std::size_t k) const {
        const std::size_t K = design.size();
        double v = 0.0;
        for (std::size_t q = 0; q < K; ++q) {
            if (q == k) {
                continue;
            }
            const SubtrialDesign& s = design.subtrials[q];
            const double xi2 = 1.0 / (1.0 / s.s02 + s.data_precision(n[q])) + mm_var[q * K + k];
            v += p2[q * K + k] * xi2;
        }
        return 1.0 / v;
    }

    double slope(std::size_t k) const { return design.subtrials[k].data_precision(1.0); }

    // a_k n_k - max(0, required_k - borrowed_k): equals the raw constraint
    // when n_k > 0 is needed, and has root n_k = 0 otherwise.
    void residual(std::span<const double> n, std::span<double> out) const {
        for (std::size_t k = 0; k < design.size(); ++k) {
            const double shortfall = required[k] - borrowed_precision(n, k);
            out[k] = slope(k) * n[k] - std::max(0.0, shortfall);
        }
    }
};

}  // namespace

SampleSizeSolution sample_size_no_borrowing(const BasketDesign& design, const DecisionSpec& spec) {
    design.validate();
    const std::size_t K = design.size();
    const std::vector<double> req = required_precision(spec, K);

    SampleSizeSolution sol;
    sol.mode = SizingMode::no_borrowing;
    sol.n_fractional.resize(K);
    sol.residuals.resize(K);
    sol.prior_sufficient.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        const SubtrialDesign& s = design.subtrials[k];
        const double n0 = s.sigma2 / (s.R * (1.0 - s.R)) * (req[k] - 1.0 / s.s02);
        if (!std::isfinite(n0)) {
            throw std::domain_error("subtrials[" + std::to_string(k) +
                                    "]: stand-alone sample size is not finite");
        }
        sol.prior_sufficient[k] = !(n0 > 0.0);
        sol.n_fractional[k] = std::max(0.0, n0);
        sol.residuals[k] = sol.prior_sufficient[k]
                               ? 0.0
                               : s.data_precision(sol.n_fractional[k]) + 1.0 / s.s02 - req[k];
    }
    sol.n_integer = ceil_sizes(sol.n_fractional);
    sol.converged = true;
    return sol;
}

std::vector<double> borrowing_constraint(const BasketDesign& design, const DecisionSpec& spec,
                                         std::span<const double> n) {
    design.validate();
    if (n.size() != design.size()) {
        throw std::invalid_argument("borrowing_constraint: n must have K entries");
    }
    const BorrowingSystem sys(design, spec);
    std::vector<double> out(design.size());
    for (std::size_t k = 0; k < design.size(); ++k) {
        out[k] = sys.slope(k) * n[k] + sys.borrowed_precision(n, k) - sys.required[k];
    }
    return out;
}

SampleSizeSolution sample_size_borrowing(const BasketDesign& design, const DecisionSpec& spec,
                                         const BorrowingOptions& options) {
    design.validate();
    const std::size_t K = design.size();
    const BorrowingSystem sys(design, spec);

    std::vector<double> x0;
    if (options.start) {
        if (options.start->size() != K) {
            throw std::invalid_argument("sample_size_borrowing: start must have K entries");
        }
        x0 = *options.start;
    } else {
        try {
            x0 = sample_size_no_borrowing(design, spec).n_fractional;
        } catch (const std::domain_error&) {
            // extreme inputs; let Newton try from a neutral start and report
            x0.assign(K, 1.0);
        }
    }

    NewtonOptions nopt;
    nopt.tol = options.tol;
    nopt.max_iter = options.max_iter;
    nopt.project_nonnegative = true;
    const NewtonResult r = solve_newton(
        [&sys](std::span<const double> n, std::span<double> out) { sys.residual(n, out); }, x0,
        nopt);
    if (!r.converged) {
        throw NonConvergenceError(r.singular_jacobian
                                      ? "borrowing system: singular Jacobian"
                                      : "borrowing system: no convergence after " +
                                            std::to_string(r.iterations) + " iterations",
                                  r.x, r.residual, r.iterations);
    }

    SampleSizeSolution sol;
    sol.mode = SizingMode::borrowing;
    sol.n_fractional = r.x;
    sol.residuals = r.residual;
    sol.iterations = r.iterations;
    sol.converged = true;
    sol.prior_sufficient.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        sol.prior_sufficient[k] = sys.borrowed_precision(sol.n_fractional, k) >= sys.required[k];
        if (sol.prior_sufficient[k]) {
            // the root of this component is n_k = 0; drop Newton's leftover
            sol.n_fractional[k] = 0.0;
        }
    }
    if (std::find(sol.prior_sufficient.begin(), sol.prior_sufficient.end(), true) !=
        sol.prior_sufficient.end()) {
        sys.residual(sol.n_fractional, sol.residuals);
    }
    sol.n_integer = ceil_sizes(sol.n_fractional);
    return sol;
}

}  // namespace basket
