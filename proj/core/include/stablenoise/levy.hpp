#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stablenoise/shot_noise.hpp"
#include "stablenoise/stable.hpp"

namespace stablenoise {

using sphere_point = std::vector<double>;  // unit vector in R^(q+1)

// (s_1..s_q) unit vector and r > 0
struct half_space_param {
    std::vector<double> s;
    double r = 1.0;
};

// <x, m> >= 0
bool hemisphere_contains(std::span<const double> m, std::span<const double> x);
// 1 iff s lies in exactly one of H_O, H_m
int symdiff_indicator(std::span<const double> O, std::span<const double> m, std::span<const double> s);
// Great-circle distance.
double geodesic_distance(std::span<const double> a, std::span<const double> b);
// (0, ..., 0, 1) in R^(q+1)
sphere_point north_pole(int q);
// Throws unless |x| = 1 within 1e-12.
void check_sphere_point(std::span<const double> x);

// sqrt(pi) sigma^-1 lambda^-1/alpha sum_i xi_i 1(s_i in H_O delta H_m) for
// every m, from one Poisson cloud on S^q. G must be symmetric.
std::vector<double> sphere_levy(const std::vector<sphere_point>& points, const sphere_point& O, double lambda,
                                const innovation_sampler& G, std::uint64_t replica);

// The cloud behind sphere_levy.
point_cloud sphere_levy_cloud(int q, double lambda, const innovation_sampler& G, std::uint64_t replica);

// 1 iff 0 < h.r < <h.s, m>
int chentsov_indicator(std::span<const double> m, const half_space_param& h);

// sigma^-1 lambda^-1/alpha sum_i xi_i 1_{V_m}(s_i, r_i) for every m, from
// one Poisson cloud on S^(q-1) x (0, R], R = max |m|, built from arrivals
// in r so that each point's value does not depend on the others. G must be
// symmetric.
std::vector<double> chentsov_levy(const std::vector<std::vector<double>>& points, double lambda,
                                  const innovation_sampler& G, std::uint64_t replica);

// Mass of V_m under (uniform probability on S^(q-1)) x dr: |m| E[<s, e>_+].
double chentsov_mass(int q, double norm_m);

}  // namespace stablenoise
