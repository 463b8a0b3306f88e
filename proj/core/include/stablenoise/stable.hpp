#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stablenoise/rng.hpp"

namespace stablenoise {

// Law S_alpha(sigma, nu) with characteristic function
// exp(-sigma^a |t|^a (1 - i nu sgn(t) tan(pi a / 2))).
struct stable_params {
    double alpha = 2.0;
    double sigma = 1.0;
    double nu = 0.0;

    stable_params() = default;
    // Validates; nu is set to 0 at alpha = 2 and must be 0 at alpha = 1.
    stable_params(double alpha, double sigma, double nu = 0.0);
};

std::complex<double> stable_char_fn(double theta, const stable_params& p);

// Chambers-Mallows-Stuck transform of one uniform on (0,1) and one unit
// exponential into a S_alpha(1, nu) variate.
double stable_standard(double alpha, double nu, double u, double w);

double draw_stable(const stable_params& p, counter_stream& s);

std::vector<double> sample_stable(const stable_params& p, std::size_t n, std::uint64_t seed,
                                  std::uint64_t stream = 0);

// E|X|^p for X ~ S_alpha(1, nu), 0 < p < alpha (any p > 0 at alpha = 2).
double stable_abs_moment(double alpha, double p, double nu = 0.0);

// int_0^inf t^-a sin t dt by quadrature, 0 < a < 2.
double sine_moment_integral(double a);
// int_0^inf t^-a (1 - cos t) dt by quadrature, 1 < a < 3.
double cosine_moment_integral(double a);

// Pareto-type tails: P(X > x) ~ p x^-alpha, P(X < -x) ~ q x^-alpha.
struct tail_spec {
    double alpha = 1.5;
    double p = 0.5;
    double q = 0.5;
};

stable_params tail_to_params(const tail_spec& t);

enum class innovation_mode { exact_stable, pareto_tail, gaussian };

std::string to_string(innovation_mode m);
innovation_mode parse_innovation_mode(const std::string& s);

// i.i.d. innovations addressed by lattice index or by a sequential stream.
// Pareto mode: tails p x^-alpha, q x^-alpha beyond x0, uniform core on
// [-x0, x0] shifted to zero mean when alpha > 1.
class innovation_sampler {
public:
    static innovation_sampler exact(const stable_params& p, std::uint64_t seed);
    static innovation_sampler pareto(const tail_spec& t, std::uint64_t seed);
    // Mean 0, variance 2 sigma^2.
    static innovation_sampler gaussian(double sigma, std::uint64_t seed);

    innovation_mode mode() const { return mode_; }
    std::uint64_t seed() const { return seed_; }
    // Stable law attracting normalized sums; the law itself in exact mode.
    const stable_params& limit() const { return limit_; }
    const tail_spec& tails() const { return tails_; }

    double draw(counter_stream& s) const;
    double at(std::span<const std::int64_t> k, std::uint64_t replica) const;
    double at1(std::int64_t k, std::uint64_t replica) const;
    // Same value as at(k, replica) given key(replica) and pack_index(k).
    philox_key key(std::uint64_t replica) const { return derive_key(seed_, replica); }
    double at_packed(philox_key key, std::uint64_t packed, stream_tag tag = stream_tag::innovation) const;

    // Characteristic function of one innovation. Pareto mode uses
    // oscillatory quadrature of the tail density.
    std::complex<double> char_fn(double u) const;

    bool symmetric() const;

    // Pareto internals, exposed for tests.
    double pareto_x0() const { return x0_; }
    double pareto_core_mass() const { return core_; }
    double pareto_shift() const { return shift_; }

private:
    innovation_mode mode_ = innovation_mode::exact_stable;
    std::uint64_t seed_ = 0;
    stable_params limit_;
    tail_spec tails_;
    double x0_ = 1.0;
    double pr_ = 0.0;
    double pl_ = 0.0;
    double core_ = 1.0;
    double shift_ = 0.0;
};

innovation_sampler make_innovation_sampler(innovation_mode mode, const stable_params& p,
                                           std::uint64_t seed);
innovation_sampler make_innovation_sampler(innovation_mode mode, const tail_spec& t,
                                           std::uint64_t seed);

}  // namespace stablenoise
