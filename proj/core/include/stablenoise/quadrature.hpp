#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace stablenoise::quad {

using fn1 = std::function<double(double)>;

struct options {
    double abs_tol = 1e-13;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
};

struct result {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    long evaluations = 0;
    // Midpoint of the interval carrying the largest error estimate.
    double worst = 0.0;

    result& operator+=(const result& o) {
        value += o.value;
        error += o.error;
        converged = converged && o.converged;
        evaluations += o.evaluations;
        return *this;
    }
};

// Gauss-Legendre nodes and weights on [-1,1]; cached per order.
struct gauss_rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const gauss_rule& gauss_legendre(int n);

// Globally adaptive Gauss-Kronrod 7/15 on [a,b].
result adaptive(const fn1& f, double a, double b, const options& opt = {});

// Adaptive over consecutive pieces of a sorted breakpoint list.
result adaptive_pieces(const fn1& f, std::span<const double> points, const options& opt = {});

// Integrand behaves like |x-a|^e at the left end (left=true) or |x-b|^e at
// the right end, with e > -1. The substitution x = a + (b-a) t^(1/(1+e))
// removes the power.
result power_singular(const fn1& f, double a, double b, double e, bool left, const options& opt = {});

// Power at both ends: split at the midpoint.
result power_singular_both(const fn1& f, double a, double b, double ea, double eb,
                           const options& opt = {});

// Integral over [a, +inf) for integrands with at most power decay. Sums
// geometrically growing panels and closes with a geometric remainder.
result to_infinity(const fn1& f, double a, double scale = 1.0, const options& opt = {});

// Integral over (-inf, b].
result from_minus_infinity(const fn1& f, double b, double scale = 1.0, const options& opt = {});

// int_a^inf y^-s cos(y) dy (cosine=true) or sin(y), a > 0, s > 0.
result fourier_tail(double a, double s, bool cosine, const options& opt = {});

}  // namespace stablenoise::quad
