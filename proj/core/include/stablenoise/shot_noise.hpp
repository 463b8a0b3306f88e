#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "stablenoise/space.hpp"
#include "stablenoise/stable.hpp"

namespace stablenoise {

// Marks (e_i, xi_i) of one Poisson or binomial cloud.
struct point_cloud {
    int coord_dim = 1;
    std::vector<double> points;  // coord_dim values per point
    std::vector<double> marks;
    double lambda = 0.0;
    double gamma = 0.0;  // sigma^-1 lambda^-1/alpha

    std::size_t size() const { return marks.size(); }
    std::span<const double> point(std::size_t i) const {
        return {points.data() + i * static_cast<std::size_t>(coord_dim), static_cast<std::size_t>(coord_dim)};
    }
    // columns e_1..e_dim, xi
    std::string to_csv() const;
};

// Count ~ Poisson(lambda m(E)); locations i.i.d. m / m(E); marks i.i.d. G.
// Streams: count, location i, mark i under the key of (G.seed, replica).
point_cloud sample_poisson_cloud(const space_spec& E, double lambda, const innovation_sampler& G, std::uint64_t replica);

// Union of two clouds at intensities lambda_a and lambda_b.
point_cloud merge(const point_cloud& a, const point_cloud& b, double alpha, double sigma);

// gamma_lambda sum_i xi_i f(e_i)
double shot_noise_eval(const point_cloud& cloud, const space_fn& f);
std::vector<double> shot_noise_eval(const point_cloud& cloud, const std::vector<space_fn>& fs);

// sigma^-1 n^-1/alpha sum_{i<n} xi_i f(e_i) with (e_i, xi_i) i.i.d. m x G; m(E) = 1.
double binomial_noise_eval(const space_spec& E, std::size_t n, const innovation_sampler& G, const space_fn& f,
                           std::uint64_t replica);

// Accepts when int |f|^alpha dm is finite.
bool check_shot_integrand(const space_spec& E, const space_fn& f, double alpha, std::string* reason = nullptr);

struct mark_char_fn_options {
    bool cached_draws = false;  // average exp(i u xi) over cached draws of G
    std::size_t draws = 100000;
    std::uint64_t seed = 0;
};

// exp(lambda int (Psi_G(theta gamma_lambda f(e)) - 1) m(de)) at finite lambda.
std::complex<double> shot_noise_char_fn(const space_spec& E, double lambda, const innovation_sampler& G, const space_fn& f,
                                        double theta, const mark_char_fn_options& o = {});

// Same for the binomial measure: (int Psi_G(theta sigma^-1 n^-1/alpha f) dm)^n.
std::complex<double> binomial_char_fn(const space_spec& E, std::size_t n, const innovation_sampler& G, const space_fn& f,
                                      double theta, const mark_char_fn_options& o = {});

}  // namespace stablenoise
