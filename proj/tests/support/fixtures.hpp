#ifndef BASKET_TESTS_FIXTURES_HPP
#define BASKET_TESTS_FIXTURES_HPP

#include "basket/commensurate.hpp"
#include "basket/decision.hpp"

#include <cmath>
#include <vector>

namespace basket::fixtures {

inline GammaMixtureHyper default_hyper() { return {1.1, 1.1, 54.0, 3.0}; }

inline BasketDesign oacs_design() {
    BasketDesign d;
    d.subtrials = {{6.177, 0.5, 0.0, 100.0}, {5.134, 0.6, 0.0, 100.0}, {5.134, 0.6, 0.0, 100.0}};
    d.weights = WeightMatrix(3, {0.0, 0.239, 0.417,
                                 0.239, 0.0, 0.145,
                                 0.417, 0.145, 0.0});
    d.hyper = default_hyper();
    d.c0 = 0.05;
    return d;
}

inline DecisionSpec oacs_spec() { return make_decision_spec(0.95, {0.90, 0.80, 0.80}, 2.3); }

inline const std::vector<double>& summit_means() {
    static const std::vector<double> v{-0.489, 0.226, -0.181, 0.293, 0.329, -0.275, -0.136};
    return v;
}

inline const std::vector<double>& summit_sds() {
    static const std::vector<double> v{0.587, 0.345, 0.380, 0.347, 0.344, 0.392, 0.392};
    return v;
}

inline BasketDesign summit_design() {
    BasketDesign d;
    for (double sd : summit_sds()) {
        d.subtrials.push_back({sd * sd, 0.5, 0.0, 100.0});
    }
    d.weights = WeightMatrix::from_hellinger(summit_means(), summit_sds());
    d.hyper = default_hyper();
    d.c0 = 0.05;
    return d;
}

inline DecisionSpec summit_spec() { return make_decision_spec(0.95, {0.80}, -0.4); }

/// K identical subtrials with a common variance and common w.
inline BasketDesign homoscedastic_design(std::size_t K, double sigma2, double w = 0.0) {
    BasketDesign d;
    d.subtrials.assign(K, SubtrialDesign{sigma2, 0.5, 0.0, 100.0});
    d.weights = WeightMatrix::uniform(K, w);
    d.hyper = default_hyper();
    d.c0 = 0.05;
    return d;
}

}  // namespace basket::fixtures

#endif  // BASKET_TESTS_FIXTURES_HPP
