#pragma once

#include <optional>
#include <string>

#include "stablenoise/filter.hpp"
#include "stablenoise/kernel.hpp"
#include "stablenoise/quadrature.hpp"

namespace stablenoise {

// Lattice h Z^d restricted to a window of active cells.
struct grid_spec {
    int dim = 1;
    double h = 0.1;
    index_window window;  // empty: chosen from the kernel
    int quad_order = 5;   // Gauss points per direction and cell
    int subcells = 1;     // cell subdivisions per direction

    grid_spec() = default;
    grid_spec(int d, double span) : dim(d), h(span) {}
    grid_spec(double span, index_window w) : dim(w.dim()), h(span), window(std::move(w)) {}

    // sigma^-1 h^((1/alpha - 1) d)
    double gamma(double alpha, double sigma) const;
    // sigma^-1 h^(d / alpha)
    double gamma_dirac(double alpha, double sigma) const;

    // Smallest window of h-cells covering b.
    index_window cover(const box& b) const;
    box cell(std::span<const std::int64_t> k) const;
};

// (psi_h f)_k = h^-d int_{h(k+I)} f, on g.window (which must be set).
cell_array psi_h(const kernel& f, const grid_spec& g);
// x -> u_[x/h]
kernel phi_h(const cell_array& u);
// phi_h o psi_h
kernel tilde_psi_h(const kernel& f, const grid_spec& g);

// (u * c-check)_l = sum_k u_k c_{k-l} over the filter window.
cell_array filter_cells(const cell_array& u, const filter_spec& c);

// Ratio gamma-hat_h / gamma_h: 1 for summable filters, h^(d - beta) otherwise.
double filter_gain(const filter_spec& c, double h);

// (gamma-hat_h / gamma_h) phi_h((psi_h f) * c-check)
kernel tilde_psi_h_c(const kernel& f, const filter_spec& c, const grid_spec& g);

// int_b f
quad::result integrate(const kernel& f, const box& b, const quad::options& opt = {});
// int_b |f|^alpha
quad::result lp_pow(const kernel& f, double alpha, const box& b, const quad::options& opt = {});
// int_{R^d} |f|^alpha. Unbounded kernels need a decay certificate; the
// part beyond the effective region is integrated (d = 1) or bounded.
quad::result lp_pow(const kernel& f, double alpha, const quad::options& opt = {});
// int_b sgn(f) |f|^alpha
quad::result signed_lp_pow(const kernel& f, double alpha, const box& b, const quad::options& opt = {});
// int sgn(f) |f|^alpha over R^d
quad::result signed_lp_pow(const kernel& f, double alpha, const quad::options& opt = {});
// ||f - g||_alpha^alpha
quad::result lp_distance_pow(const kernel& f, const kernel& g, double alpha, const quad::options& opt = {});

// int_{|x|_inf > R} (C |x|^-eta exp(-rate |x|^pw))^alpha dx
double tail_bound(const decay_certificate& c, double alpha, int dim, double R);

struct effective_region {
    box region;
    double tail = 0.0;   // certified bound on int over the complement of |f|^alpha
    double norm = 0.0;   // int |f|^alpha over the region
    bool within_budget = true;
};

// Box carrying all but eps ||f||_alpha^alpha of the mass; R is capped at
// max_radius.
effective_region find_effective_region(const kernel& f, double alpha, double eps = 1e-4,
                                       double max_radius = 1e6);

enum class integrand_class { in_L_alpha, in_D_alpha, rejected };

struct integrand_report {
    integrand_class verdict = integrand_class::rejected;
    bool in_L_alpha = false;
    bool in_D_alpha = false;
    double norm_pow = 0.0;  // int |f|^alpha when finite
    std::string reason;

    bool accepted(double alpha) const { return alpha >= 1.0 ? in_L_alpha : in_D_alpha; }
};

// L^alpha membership for alpha >= 1; for alpha < 1 additionally D^alpha:
// local integrability and decay faster than |x|^-(d/alpha).
integrand_report check_integrand(const kernel& f, double alpha);

std::string to_string(integrand_class c);

}  // namespace stablenoise
