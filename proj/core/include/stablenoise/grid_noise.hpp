#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "stablenoise/filter.hpp"
#include "stablenoise/grid_ops.hpp"
#include "stablenoise/kernel.hpp"
#include "stablenoise/stable.hpp"

namespace stablenoise {

// Linear functional of the innovation field:
//   value = sum_k weights_k xi_k + Z,  Z ~ S_alpha(lump_scale, lump_nu)
// Z stands for the far field beyond the window when it can be drawn exactly
// (stable or Gaussian innovations, d = 1). One Z is drawn per replica and
// shared by every functional evaluated on that replica.
struct noise_functional {
    index_window window;
    std::vector<double> weights;
    double alpha = 2.0;
    double lump_scale = 0.0;
    double lump_nu = 0.0;
    // Certified int |f|^alpha outside the window that is neither represented
    // nor lumped.
    double truncation = 0.0;

    double eval(const innovation_sampler& xi, std::uint64_t replica) const;
    // Innovation indices with a nonzero weight.
    std::vector<std::vector<std::int64_t>> touched() const;
};

// Evaluates several functionals on one replica, drawing each innovation once.
std::vector<double> eval_many(const std::vector<noise_functional>& fs, const innovation_sampler& xi,
                              std::uint64_t replica);

struct prepare_options {
    double eps = 1e-4;                 // truncation budget relative to ||f||_alpha^alpha
    std::size_t max_cells = 1u << 20;  // largest automatic window
    bool far_field = true;             // lump the far field when it can be drawn exactly
    double far_radius = 0.0;           // window radius when lumping; 0 picks one
    bool check = true;                 // run check_integrand first
};

// mu_h[f] = sigma^-1 h^(d/alpha) sum_k xi_k (psi_h f)_k
class grid_noise {
public:
    grid_noise(grid_spec g, innovation_sampler xi);

    const grid_spec& grid() const { return grid_; }
    const innovation_sampler& innovations() const { return xi_; }
    double alpha() const { return xi_.limit().alpha; }
    double sigma() const { return xi_.limit().sigma; }
    double gamma() const { return grid_.gamma(alpha(), sigma()); }
    double gamma_dirac() const { return grid_.gamma_dirac(alpha(), sigma()); }

    // Same innovations on the lattice of span h.
    grid_noise with_span(double h) const;

    noise_functional prepare(const kernel& f, const prepare_options& o = {}) const;
    // sigma^-1 h^(d/alpha) sum_k xi_k f(hk); f must be continuous.
    noise_functional prepare_dirac(const kernel& f, const prepare_options& o = {}) const;
    // mu_h[tilde psi_h^c f]; alpha must exceed 1.
    noise_functional prepare_filtered(const kernel& f, const filter_spec& c, const prepare_options& o = {}) const;

    double eval(const kernel& f, std::uint64_t replica) const { return prepare(f).eval(xi_, replica); }
    double eval_dirac(const kernel& f, std::uint64_t replica) const { return prepare_dirac(f).eval(xi_, replica); }
    double eval_filtered(const kernel& f, const filter_spec& c, std::uint64_t replica) const {
        return prepare_filtered(f, c).eval(xi_, replica);
    }

    // Window of cells for f plus the certified tail outside it.
    std::pair<index_window, double> window_for(const kernel& f, const prepare_options& o, bool* lump) const;

private:
    bool can_lump() const;
    void add_lump(noise_functional& nf, const kernel& f) const;

    grid_spec grid_;
    innovation_sampler xi_;
};

// (mu_h[f(c .)], c^(-d/alpha) mu_{ch}[f]) on one path, cells matched k -> k.
std::pair<double, double> scaling_transport(const grid_noise& noise, const kernel& f, double c, std::uint64_t replica);

// X_t = mu_h[f_t] for every kernel of the family, on one path.
std::vector<double> simulate_process(const grid_noise& noise, const std::vector<kernel>& family,
                                     std::uint64_t replica, const prepare_options& o = {});

// C_{alpha,p} ||tilde psi_h f_M - f||_alpha^p
double error_bound(const kernel& f, const kernel& f_M, const grid_spec& g, double p, const stable_params& params);

struct coupled_error_report {
    double bound = 0.0;      // error_bound(...)
    double empirical = 0.0;  // mean |mu_h[f_M] - W[f]|^p
    double std_error = 0.0;
    double ratio = 0.0;      // empirical / bound
    double norm = 0.0;       // ||tilde psi_h f_M - f||_alpha
    std::size_t n = 0;
};

// mu_h[f_M] and W[f] on one exact-stable path: W is represented on the
// lattice of span h / refine whose cell sums give the coarse innovations.
// d = 1.
coupled_error_report coupled_error_study(const kernel& f, const kernel& f_M, double h, double p,
                                         const stable_params& params, std::size_t n, std::uint64_t seed,
                                         int refine = 16, int threads = 0);

}  // namespace stablenoise
