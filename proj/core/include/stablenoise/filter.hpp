#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stablenoise/kernel.hpp"

namespace stablenoise {

// Homogeneous function of order -beta on the line: p(x) = plus x^-beta for
// x > 0 and minus |x|^-beta for x < 0.
struct homogeneous_profile {
    double beta = 0.75;
    double plus = 1.0;
    double minus = 1.0;

    double operator()(double x) const;
    // sup of |p| on the unit sphere {-1, +1}
    double sphere_bound() const;
    void validate(double alpha) const;  // requires 1/alpha < beta < 1
};

enum class filter_regime { summable, regularly_varying };

std::string to_string(filter_regime r);

// Coefficients c_k on a finite window, optionally with an analytic law c(k)
// valid for every k (used beyond the window).
struct filter_spec {
    filter_regime regime = filter_regime::summable;
    index_window window;
    std::vector<double> coeffs;
    homogeneous_profile profile;  // regularly varying regime
    std::function<double(double)> law;
    std::string description;

    int dim() const { return window.dim(); }
    double coeff(std::span<const std::int64_t> k) const;
    double coeff1(std::int64_t k) const;
    // Sum of the explicit coefficients.
    double sum() const;
    // sum over k outside the window of |c_k|, from the analytic law (d = 1).
    double omitted_l1() const;

    static filter_spec identity(int dim);
    // c_k = r^|k| for |k| <= K
    static filter_spec geometric(double r, std::int64_t K);
    // c_k = p(k) for 0 < |k| <= K, c_0 given
    static filter_spec power(const homogeneous_profile& p, std::int64_t K, double c0 = 1.0);
    static filter_spec explicit_coefficients(index_window w, std::vector<double> c, filter_regime r);
};

}  // namespace stablenoise
