#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "stablenoise/filter.hpp"
#include "stablenoise/kernel.hpp"
#include "stablenoise/stable.hpp"

namespace stablenoise {

// (f * p-check)(x) = int f(y) p(y - x) dy, d = 1.
double fractional_convolution(const kernel& f, const homogeneous_profile& p, double x);

// S_alpha parameters of W_alpha[f * p-check] for innovations of skewness nu.
stable_params fractional_eval_params(const kernel& f, const homogeneous_profile& p, const stable_params& params);

// n exact draws at fractional_eval_params(f, p, params).
std::vector<double> sample_fractional(const kernel& f, const homogeneous_profile& p, const stable_params& params,
                                      std::size_t n, std::uint64_t seed);

// K(x, y) = int p(x - z) p(y - z) dz; needs 1/2 < beta < 1 and x != y.
double covariance_kernel(double x, double y, const homogeneous_profile& p);

// int int f(x) K(x, y) f(y) dx dy using K(x, y) = |y - x|^(1 - 2 beta) K(0, sgn(y - x)).
double covariance_quadratic_form(const kernel& f, const homogeneous_profile& p);

struct regvar_report {
    std::vector<double> t;
    std::vector<double> sup_error;
    bool pass = false;
};

// sup over x in {-1, +1} of |t^beta c_[tx] - p(x)| at t in {10, 1e2, 1e3, 1e4};
// pass when strictly decreasing (or at rounding level).
regvar_report regular_variation_check(const filter_spec& c, const homogeneous_profile& p);

// h^u evaluator(f(h .))
double renormalize(double u, double h, const std::function<double(const kernel&)>& evaluator, const kernel& f);

}  // namespace stablenoise
