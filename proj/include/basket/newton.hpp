#ifndef BASKET_NEWTON_HPP
#define BASKET_NEWTON_HPP

#include <functional>
#include <span>
#include <vector>

namespace basket {

/// Residual callback: writes F(x) into `out` (same length as x).
using ResidualFn = std::function<void(std::span<const double> x, std::span<double> out)>;

struct NewtonOptions {
    double tol = 1e-8;         ///< on the infinity norm of F
    int max_iter = 100;
    int max_halvings = 30;
    bool project_nonnegative = true;
};

struct NewtonResult {
    std::vector<double> x;
    std::vector<double> residual;
    int iterations = 0;
    bool converged = false;
    bool singular_jacobian = false;
};

/// Damped Newton iteration for small dense systems. The Jacobian is formed
/// by central differences with step max(1e-6, 1e-6 |x_i|). Each accepted
/// step strictly decreases ||F||_inf; up to `max_halvings` step halvings are
/// tried. A singular Jacobian is regularized once before giving up.
NewtonResult solve_newton(const ResidualFn& F, std::span<const double> x0,
                          const NewtonOptions& options = {});

}  // namespace basket

#endif  // BASKET_NEWTON_HPP
