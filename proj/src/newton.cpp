#include "basket/newton.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace basket {

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) {
            return std::numeric_limits<double>::infinity();
        }
        m = std::max(m, std::abs(x));
    }
    return m;
}

void project(std::vector<double>& x, bool nonnegative) {
    if (nonnegative) {
        for (double& v : x) {
            v = std::max(0.0, v);
        }
    }
}

Eigen::MatrixXd fd_jacobian(const ResidualFn& F, const std::vector<double>& x) {
    const std::size_t n = x.size();
    Eigen::MatrixXd J(n, n);
    std::vector<double> xp = x;
    std::vector<double> fp(n);
    std::vector<double> fm(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double h = std::max(1e-6, 1e-6 * std::abs(x[i]));
        xp[i] = x[i] + h;
        F(xp, fp);
        xp[i] = x[i] - h;
        F(xp, fm);
        xp[i] = x[i];
        for (std::size_t r = 0; r < n; ++r) {
            J(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    return J;
}

}  // namespace

NewtonResult solve_newton(const ResidualFn& F, std::span<const double> x0,
                          const NewtonOptions& options) {
    const std::size_t n = x0.size();
    if (n == 0) {
        throw std::invalid_argument("solve_newton: empty starting point");
    }

    NewtonResult res;
    res.x.assign(x0.begin(), x0.end());
    project(res.x, options.project_nonnegative);
    res.residual.resize(n);
    F(res.x, res.residual);
    double norm = inf_norm(res.residual);

    std::vector<double> trial(n);
    std::vector<double> f_trial(n);
    while (norm >= options.tol && res.iterations < options.max_iter) {
        Eigen::MatrixXd J = fd_jacobian(F, res.x);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (!lu.isInvertible()) {
            const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
            J += 1e-8 * scale * Eigen::MatrixXd::Identity(J.rows(), J.cols());
            lu.compute(J);
            if (!lu.isInvertible()) {
                res.singular_jacobian = true;
                return res;
            }
        }
        const Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(res.residual.data(),
                                                                    static_cast<Eigen::Index>(n));
        const Eigen::VectorXd step = lu.solve(-f);

        bool accepted = false;
        double t = 1.0;
        for (int h = 0; h <= options.max_halvings; ++h, t *= 0.5) {
            for (std::size_t i = 0; i < n; ++i) {
                trial[i] = res.x[i] + t * step(static_cast<Eigen::Index>(i));
            }
            project(trial, options.project_nonnegative);
            F(trial, f_trial);
            const double trial_norm = inf_norm(f_trial);
            if (trial_norm < norm) {
                res.x = trial;
                res.residual = f_trial;
                norm = trial_norm;
                accepted = true;
                break;
            }
        }
        ++res.iterations;
        if (!accepted) {
            break;
        }
    }
    res.converged = norm < options.tol;
    return res;
}

}  // namespace basket
