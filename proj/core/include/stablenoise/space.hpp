#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "stablenoise/kernel.hpp"
#include "stablenoise/quadrature.hpp"
#include "stablenoise/rng.hpp"
#include "stablenoise/stable.hpp"

namespace stablenoise {

using space_fn = std::function<double(std::span<const double>)>;

// Measured space (E, m). Points are vectors of coord_dim() reals.
class space_spec {
public:
    virtual ~space_spec() = default;

    virtual int coord_dim() const = 0;
    // m(E), or nullopt for infinite mass.
    virtual std::optional<double> total_mass() const = 0;
    // e ~ m / m(E)
    virtual void sample(counter_stream& s, std::span<double> out) const = 0;
    // int g dm
    virtual quad::result integrate(const space_fn& g) const = 0;
    // int sgn(g) |g|^alpha dm (signed) or int |g|^alpha dm
    virtual quad::result integrate_pow(const space_fn& g, double alpha, bool signed_power = false) const;
    virtual std::string describe() const = 0;
};

using space_ptr = std::shared_ptr<const space_spec>;

// Box in R^d with an optional density (bounded by density_bound).
space_ptr make_box_space(const box& b, space_fn density = {}, double density_bound = 0.0);
// Unit sphere S^q in R^(q+1) with the uniform probability measure; q in {1, 2, 3}.
space_ptr make_sphere_space(int q);
// S^(q-1) x (0, R] with (uniform probability) x dr; points are (s_1..s_q, r).
space_ptr make_half_space_param_space(int q, double R);
// R^d with Lebesgue measure (infinite mass; integration only for kernels).
space_ptr make_lebesgue_space(int d);

// (sigma_f, nu_f) with sigma_f^alpha = int |f|^alpha dm and
// sigma_f^alpha nu_f = nu int sgn(f) |f|^alpha dm.
stable_params integral_params(const kernel& f, double alpha, double nu);
stable_params integral_params(const space_spec& E, const space_fn& f, double alpha, double nu);

}  // namespace stablenoise
