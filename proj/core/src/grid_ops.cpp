#include "stablenoise/grid_ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "stablenoise/errors.hpp"

namespace stablenoise {

namespace {

using detail::node;
using detail::node_kind;

double ipow(double h, int d) {
    double r = 1.0;
    for (int i = 0; i < d; ++i) r *= h;
    return r;
}

// Calls fn(k) for every multi-index of w (row-major).
template <class F>
void for_each_index(const index_window& w, F&& fn) {
    const int d = w.dim();
    const std::size_t n = w.size();
    std::array<std::int64_t, max_kernel_dim> k{};
    for (int i = 0; i < d; ++i) k[i] = w.lo[i];
    for (std::size_t j = 0; j < n; ++j) {
        fn(std::span<const std::int64_t>(k.data(), d));
        for (int i = d - 1; i >= 0; --i) {
            if (++k[i] < w.hi[i]) break;
            k[i] = w.lo[i];
        }
    }
}

// Tensor Gauss rule of order q on b, each side split into s panels.
double tensor_gauss(const node& n, const box& b, int q, int s) {
    const int d = b.dim();
    const auto& rule = quad::gauss_legendre(q);
    const int m = q * s;
    std::vector<double> pts(static_cast<std::size_t>(d * m)), wts(static_cast<std::size_t>(d * m));
    for (int i = 0; i < d; ++i) {
        const double w = (b.hi[i] - b.lo[i]) / s;
        for (int p = 0; p < s; ++p) {
            const double a = b.lo[i] + p * w;
            for (int j = 0; j < q; ++j) {
                pts[i * m + p * q + j] = a + 0.5 * w * (rule.nodes[j] + 1.0);
                wts[i * m + p * q + j] = 0.5 * w * rule.weights[j];
            }
        }
    }
    std::array<int, max_kernel_dim> idx{};
    std::array<double, max_kernel_dim> x{};
    double total = 0.0;
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            x[i] = pts[i * m + idx[i]];
            w *= wts[i * m + idx[i]];
        }
        total += w * n.eval(x.data(), d);
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++idx[i] < m) break;
            idx[i] = 0;
        }
        if (i < 0) break;
    }
    return total;
}

// Overlap of b with the cells origin + span (k + [0,1)^d) weighted by the cell values.
double step_overlap(const detail::step_node& s, const box& b) {
    const int d = b.dim();
    const index_window& w = s.cells.window();
    std::vector<std::int64_t> lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
        lo[i] = std::max(w.lo[i], static_cast<std::int64_t>(std::floor((b.lo[i] - s.origin[i]) / s.span)));
        hi[i] = std::min(w.hi[i], static_cast<std::int64_t>(std::ceil((b.hi[i] - s.origin[i]) / s.span)));
        if (hi[i] <= lo[i]) return 0.0;
    }
    double total = 0.0;
    for_each_index(index_window(lo, hi), [&](std::span<const std::int64_t> k) {
        double vol = 1.0;
        for (int i = 0; i < d; ++i) {
            const double a = s.origin[i] + s.span * static_cast<double>(k[i]);
            const double e = std::min(b.hi[i], a + s.span) - std::max(b.lo[i], a);
            if (e <= 0.0) {
                vol = 0.0;
                break;
            }
            vol *= e;
        }
        if (vol > 0.0) total += vol * s.cells.at(k);
    });
    return total;
}

struct cell_rule {
    int order;
    int subcells;
};

// int_b n
double integrate_over(const node& n, const box& b, const cell_rule& r) {
    if (b.empty()) return 0.0;
    switch (n.kind) {
        case node_kind::function: return tensor_gauss(n, b, r.order, r.subcells);
        case node_kind::indicator: {
            const auto& s = static_cast<const detail::indicator_node&>(n);
            const box o = s.region.intersect(b);
            return o.empty() ? 0.0 : s.scale * o.volume();
        }
        case node_kind::step: return step_overlap(static_cast<const detail::step_node&>(n), b);
        case node_kind::sum: {
            const auto& s = static_cast<const detail::sum_node&>(n);
            double t = 0.0;
            for (std::size_t i = 0; i < s.terms.size(); ++i) t += s.coeffs[i] * integrate_over(*s.terms[i], b, r);
            return t;
        }
        case node_kind::scale: {
            const auto& s = static_cast<const detail::scale_node&>(n);
            return s.factor * integrate_over(*s.child, b, r);
        }
        case node_kind::dilate: {
            const auto& s = static_cast<const detail::dilate_node&>(n);
            box cb = b;
            for (int i = 0; i < b.dim(); ++i) {
                cb.lo[i] *= s.factor;
                cb.hi[i] *= s.factor;
            }
            return integrate_over(*s.child, cb, r) / ipow(s.factor, b.dim());
        }
        case node_kind::translate: {
            const auto& s = static_cast<const detail::translate_node&>(n);
            std::vector<double> m(s.shift.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = -s.shift[i];
            return integrate_over(*s.child, b.shifted(m), r);
        }
        case node_kind::restrict_to: {
            const auto& s = static_cast<const detail::restrict_node&>(n);
            return integrate_over(*s.child, b.intersect(s.region), r);
        }
    }
    return 0.0;
}

// Cell means of n on the grid; linear structure handled array-wise.
std::vector<double> cell_means(const node& n, const grid_spec& g) {
    const index_window& w = g.window;
    const int d = g.dim;
    switch (n.kind) {
        case node_kind::sum: {
            const auto& s = static_cast<const detail::sum_node&>(n);
            std::vector<double> out(w.size(), 0.0);
            for (std::size_t t = 0; t < s.terms.size(); ++t) {
                const std::vector<double> v = cell_means(*s.terms[t], g);
                for (std::size_t i = 0; i < out.size(); ++i) out[i] += s.coeffs[t] * v[i];
            }
            return out;
        }
        case node_kind::scale: {
            const auto& s = static_cast<const detail::scale_node&>(n);
            std::vector<double> v = cell_means(*s.child, g);
            for (double& x : v) x *= s.factor;
            return v;
        }
        case node_kind::step: {
            const auto& s = static_cast<const detail::step_node&>(n);
            const bool aligned = s.span == g.h && std::all_of(s.origin.begin(), s.origin.end(), [](double o) { return o == 0.0; });
            if (aligned) {
                // cells coincide: copy values
                std::vector<double> out(w.size(), 0.0);
                std::size_t j = 0;
                for_each_index(w, [&](std::span<const std::int64_t> k) { out[j++] = s.cells.at(k); });
                return out;
            }
            break;
        }
        default: break;
    }
    std::vector<double> out(w.size(), 0.0);
    const double vol = ipow(g.h, d);
    const cell_rule rule{g.quad_order, g.subcells};
    std::size_t j = 0;
    for_each_index(w, [&](std::span<const std::int64_t> k) { out[j++] = integrate_over(n, g.cell(k), rule) / vol; });
    return out;
}

// Per-dimension panels for tensor integration over b: breakpoints inside b
// plus a uniform refinement.
std::vector<std::vector<double>> panels(const kernel& f, const box& b, int refine) {
    const auto bp = f.breakpoints();
    std::vector<std::vector<double>> out(b.dim());
    for (int i = 0; i < b.dim(); ++i) {
        auto& v = out[i];
        v.push_back(b.lo[i]);
        v.push_back(b.hi[i]);
        for (double x : bp[i])
            if (x > b.lo[i] && x < b.hi[i]) v.push_back(x);
        for (int j = 1; j < refine; ++j) v.push_back(b.lo[i] + (b.hi[i] - b.lo[i]) * j / refine);
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return out;
}

// Tensor Gauss of g over the product of panels, at two orders for an error estimate.
quad::result tensor_panels(const std::function<double(const double*)>& g, const std::vector<std::vector<double>>& pan) {
    const int d = static_cast<int>(pan.size());
    quad::result res;
    for (int order : {6, 10}) {
        const auto& rule = quad::gauss_legendre(order);
        std::vector<std::vector<double>> pts(d), wts(d);
        for (int i = 0; i < d; ++i)
            for (std::size_t p = 0; p + 1 < pan[i].size(); ++p) {
                const double a = pan[i][p], w = pan[i][p + 1] - pan[i][p];
                for (int j = 0; j < order; ++j) {
                    pts[i].push_back(a + 0.5 * w * (rule.nodes[j] + 1.0));
                    wts[i].push_back(0.5 * w * rule.weights[j]);
                }
            }
        std::array<std::size_t, max_kernel_dim> idx{};
        std::array<double, max_kernel_dim> x{};
        double total = 0.0;
        long evals = 0;
        for (;;) {
            double w = 1.0;
            for (int i = 0; i < d; ++i) {
                x[i] = pts[i][idx[i]];
                w *= wts[i][idx[i]];
            }
            total += w * g(x.data());
            ++evals;
            int i = d - 1;
            for (; i >= 0; --i) {
                if (++idx[i] < pts[i].size()) break;
                idx[i] = 0;
            }
            if (i < 0) break;
        }
        res.error = std::abs(total - res.value);
        res.value = total;
        res.evaluations += evals;
    }
    res.converged = std::isfinite(res.value) && res.error <= 1e-6 * std::abs(res.value) + 1e-12;
    return res;
}

// Local power exponent of |f| at x0 from the side given by dir.
double local_exponent(const quad::fn1& f, double x0, double dir) {
    const double a = std::abs(f(x0 + dir * 1e-5));
    const double b = std::abs(f(x0 + dir * 1e-8));
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) return 0.0;
    return std::log(b / a) / std::log(1e-3);
}

quad::options loose() {
    quad::options o;
    o.abs_tol = 1e-11;
    o.rel_tol = 1e-9;
    o.max_intervals = 2000;
    return o;
}

quad::result power_integral(const kernel& f, double alpha, const box& b, bool sgn, const quad::options& opt) {
    if (b.empty()) return {};
    const auto g = [&f, alpha, sgn](double x) {
        const double v = f(x);
        const double a = std::pow(std::abs(v), alpha);
        return sgn && v < 0.0 ? -a : a;
    };
    if (f.dim() == 1) {
        const auto bps = f.breakpoints();
        const auto& bp0 = bps[0];
        std::vector<double> pts{b.lo[0], b.hi[0]};
        for (double x : bp0)
            if (x > b.lo[0] && x < b.hi[0]) pts.push_back(x);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        quad::result total;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            quad::result r = quad::adaptive(g, pts[i], pts[i + 1], opt);
            if (!r.converged) {
                // try to resolve an endpoint or interior power singularity
                double x0 = r.worst;
                const double tol = 1e-6 * (pts[i + 1] - pts[i]);
                if (x0 - pts[i] < tol) x0 = pts[i];
                if (pts[i + 1] - x0 < tol) x0 = pts[i + 1];
                quad::result s;
                if (x0 > pts[i]) {
                    const double e = alpha * local_exponent([&f](double x) { return f(x); }, x0, -1.0);
                    s += e > -1.0 ? quad::power_singular(g, pts[i], x0, std::min(e, 0.0), false, opt)
                                  : quad::result{std::numeric_limits<double>::infinity(), 0.0, false, 0, x0};
                }
                if (x0 < pts[i + 1]) {
                    const double e = alpha * local_exponent([&f](double x) { return f(x); }, x0, 1.0);
                    s += e > -1.0 ? quad::power_singular(g, x0, pts[i + 1], std::min(e, 0.0), true, opt)
                                  : quad::result{std::numeric_limits<double>::infinity(), 0.0, false, 0, x0};
                }
                if (s.converged || !std::isfinite(s.value)) r = s;
                r.worst = x0;
            }
            total += r;
            if (!r.converged) total.worst = r.worst;
        }
        return total;
    }
    const int d = f.dim();
    return tensor_panels(
        [&f, alpha, d, sgn](const double* x) {
            const double v = f(std::span<const double>(x, d));
            const double a = std::pow(std::abs(v), alpha);
            return sgn && v < 0.0 ? -a : a;
        },
        panels(f, b, 8));
}

}  // namespace

double grid_spec::gamma(double alpha, double sigma) const {
    return std::pow(h, (1.0 / alpha - 1.0) * dim) / sigma;
}

double grid_spec::gamma_dirac(double alpha, double sigma) const { return std::pow(h, dim / alpha) / sigma; }

index_window grid_spec::cover(const box& b) const {
    if (b.dim() != dim) throw std::invalid_argument("grid_spec::cover: dimension mismatch");
    std::vector<std::int64_t> lo(dim), hi(dim);
    for (int i = 0; i < dim; ++i) {
        lo[i] = static_cast<std::int64_t>(std::floor(b.lo[i] / h));
        hi[i] = static_cast<std::int64_t>(std::ceil(b.hi[i] / h));
        if (hi[i] <= lo[i]) hi[i] = lo[i] + 1;
    }
    return index_window(lo, hi);
}

box grid_spec::cell(std::span<const std::int64_t> k) const {
    std::vector<double> lo(dim), hi(dim);
    for (int i = 0; i < dim; ++i) {
        lo[i] = h * static_cast<double>(k[i]);
        hi[i] = h * static_cast<double>(k[i] + 1);
    }
    return box(lo, hi);
}

cell_array psi_h(const kernel& f, const grid_spec& g) {
    if (!f.valid()) throw std::invalid_argument("psi_h: empty kernel");
    if (f.dim() != g.dim) throw std::invalid_argument("psi_h: kernel and grid dimensions differ");
    if (!(g.h > 0.0)) throw std::invalid_argument("psi_h: span must be > 0");
    if (g.window.dim() != g.dim) throw std::invalid_argument("psi_h: grid window not set");
    std::vector<double> v = cell_means(*f.root(), g);
    for (double x : v)
        if (!std::isfinite(x)) throw numerical_failure("psi_h: non-finite cell integral");
    return cell_array(g.h, g.window, std::move(v));
}

kernel phi_h(const cell_array& u) { return kernel::step(u); }

kernel tilde_psi_h(const kernel& f, const grid_spec& g) { return phi_h(psi_h(f, g)); }

cell_array filter_cells(const cell_array& u, const filter_spec& c) {
    const int d = u.dim();
    if (c.dim() != d) throw std::invalid_argument("filter: dimension mismatch");
    const index_window& uw = u.window();
    const index_window& cw = c.window;
    // l = k - j with k in uw and j in cw
    std::vector<std::int64_t> lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
        lo[i] = uw.lo[i] - (cw.hi[i] - 1);
        hi[i] = uw.hi[i] - cw.lo[i];
    }
    cell_array out(u.h(), index_window(lo, hi));
    std::vector<std::int64_t> l(d);
    std::size_t ki = 0;
    for_each_index(uw, [&](std::span<const std::int64_t> k) {
        const double uk = u[ki++];
        if (uk == 0.0) return;
        std::size_t ji = 0;
        for_each_index(cw, [&](std::span<const std::int64_t> j) {
            const double cj = c.coeffs[ji++];
            for (int i = 0; i < d; ++i) l[i] = k[i] - j[i];
            out[out.window().linear(l)] += uk * cj;
        });
    });
    return out;
}

double filter_gain(const filter_spec& c, double h) {
    if (c.regime == filter_regime::summable) return 1.0;
    return std::pow(h, c.dim() - c.profile.beta);
}

kernel tilde_psi_h_c(const kernel& f, const filter_spec& c, const grid_spec& g) {
    const cell_array conv = filter_cells(psi_h(f, g), c);
    const double gain = filter_gain(c, g.h);
    if (gain == 1.0) return phi_h(conv);
    return gain * phi_h(conv);
}

quad::result integrate(const kernel& f, const box& b, const quad::options& opt) {
    if (b.empty()) return {};
    if (f.dim() == 1) {
        const auto bps = f.breakpoints();
        const auto& bp0 = bps[0];
        std::vector<double> pts{b.lo[0], b.hi[0]};
        for (double x : bp0)
            if (x > b.lo[0] && x < b.hi[0]) pts.push_back(x);
        std::sort(pts.begin(), pts.end());
        return quad::adaptive_pieces([&f](double x) { return f(x); }, pts, opt);
    }
    const int d = f.dim();
    return tensor_panels([&f, d](const double* x) { return f(std::span<const double>(x, d)); }, panels(f, b, 8));
}

double tail_bound(const decay_certificate& c, double alpha, int dim, double R) {
    if (c.C == 0.0) return 0.0;
    R = std::max(R, c.radius);
    const double surf = 2.0 * dim * std::pow(2.0, dim - 1);
    if (!c.superpolynomial()) {
        const double e = alpha * c.eta - dim;
        if (e <= 0.0) return std::numeric_limits<double>::infinity();
        return surf * std::pow(c.C, alpha) * std::pow(R, -e) / e;
    }
    const auto g = [&](double r) { return surf * std::pow(r, dim - 1) * std::pow(c.bound(r), alpha); };
    return quad::to_infinity(g, R, std::max(1.0, R)).value;
}

effective_region find_effective_region(const kernel& f, double alpha, double eps, double max_radius) {
    effective_region out;
    if (f.support()) {
        out.region = *f.support();
        out.norm = lp_pow(f, alpha, out.region, loose()).value;
        return out;
    }
    if (!f.decay()) throw integrand_rejected("kernel has unbounded support and no decay certificate");
    const decay_certificate& c = *f.decay();
    double R = std::max(c.radius, 1e-300);
    const double N0 = lp_pow(f, alpha, box::cube(f.dim(), -R, R), loose()).value;
    const double target = eps * N0;
    if (tail_bound(c, alpha, f.dim(), R) > target) {
        double lo = R, hi = R;
        while (hi < max_radius && tail_bound(c, alpha, f.dim(), hi) > target) {
            lo = hi;
            hi *= 2.0;
        }
        hi = std::min(hi, max_radius);
        if (tail_bound(c, alpha, f.dim(), hi) > target) {
            R = hi;
            out.within_budget = false;
        } else {
            for (int it = 0; it < 60 && hi - lo > 1e-6 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (tail_bound(c, alpha, f.dim(), mid) > target ? lo : hi) = mid;
            }
            R = hi;
        }
    }
    out.region = box::cube(f.dim(), -R, R);
    out.tail = tail_bound(c, alpha, f.dim(), R);
    out.norm = lp_pow(f, alpha, out.region, loose()).value;
    return out;
}

quad::result power_integral_all(const kernel& f, double alpha, bool sgn, const quad::options& opt) {
    if (f.support()) return power_integral(f, alpha, *f.support(), sgn, opt);
    if (!f.decay()) throw integrand_rejected("kernel has unbounded support and no decay certificate");
    const double R = f.decay()->radius;
    const box core = box::cube(f.dim(), -R, R);
    quad::result r = power_integral(f, alpha, core, sgn, opt);
    if (f.dim() == 1) {
        const auto g = [&f, alpha, sgn](double x) {
            const double v = f(x);
            const double a = std::pow(std::abs(v), alpha);
            return sgn && v < 0.0 ? -a : a;
        };
        r += quad::to_infinity(g, R, std::max(1.0, R), opt);
        r += quad::from_minus_infinity(g, -R, std::max(1.0, R), opt);
        return r;
    }
    const effective_region e = find_effective_region(f, alpha);
    quad::result s = power_integral(f, alpha, e.region, sgn, opt);
    s.error += e.tail;
    if (!sgn) s.value += 0.5 * e.tail;
    return s;
}

quad::result lp_pow(const kernel& f, double alpha, const box& b, const quad::options& opt) {
    return power_integral(f, alpha, b, false, opt);
}

quad::result lp_pow(const kernel& f, double alpha, const quad::options& opt) {
    return power_integral_all(f, alpha, false, opt);
}

quad::result signed_lp_pow(const kernel& f, double alpha, const box& b, const quad::options& opt) {
    return power_integral(f, alpha, b, true, opt);
}

quad::result signed_lp_pow(const kernel& f, double alpha, const quad::options& opt) {
    return power_integral_all(f, alpha, true, opt);
}

quad::result lp_distance_pow(const kernel& f, const kernel& g, double alpha, const quad::options& opt) {
    return lp_pow(f - g, alpha, opt);
}

std::string to_string(integrand_class c) {
    switch (c) {
        case integrand_class::in_L_alpha: return "in-L-alpha";
        case integrand_class::in_D_alpha: return "in-D-alpha";
        case integrand_class::rejected: return "rejected";
    }
    return "rejected";
}

integrand_report check_integrand(const kernel& f, double alpha) {
    integrand_report rep;
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        rep.reason = "alpha must lie in (0, 2]";
        return rep;
    }
    if (!f.valid()) {
        rep.reason = "empty kernel";
        return rep;
    }
    const int d = f.dim();
    box core;
    std::optional<decay_certificate> cert;
    if (f.support()) {
        core = *f.support();
    } else {
        if (!f.decay()) {
            rep.reason = "unbounded support without a decay certificate";
            return rep;
        }
        cert = *f.decay();
        core = box::cube(d, -cert->radius, cert->radius);
    }

    // local integrability of |f|^alpha and |f|
    const quad::result la = lp_pow(f, alpha, core, loose());
    const quad::result l1 = alpha == 1.0 ? la : lp_pow(f, 1.0, core, loose());
    const bool local_a = la.converged && std::isfinite(la.value);
    const bool local_1 = l1.converged && std::isfinite(l1.value);

    bool tail_ok = true;
    std::string tail_reason;
    if (cert) {
        // falsify the declared certificate at 32 log-spaced radii
        std::vector<std::vector<double>> dirs;
        for (int i = 0; i < d; ++i)
            for (double s : {1.0, -1.0}) {
                std::vector<double> v(d, 0.0);
                v[i] = s;
                dirs.push_back(v);
            }
        if (d > 1) {
            dirs.emplace_back(d, 1.0);
            dirs.emplace_back(d, -1.0);
        }
        const double R0 = std::max(cert->radius, 1e-3);
        for (int j = 0; j < 32 && tail_ok; ++j) {
            const double r = R0 * std::pow(1e4, j / 31.0);
            for (const auto& u : dirs) {
                std::vector<double> x(u);
                for (double& v : x) v *= r;
                const double fx = std::abs(f(x));
                const double b = cert->bound(r);
                if (fx > b * (1.0 + 1e-9) + 1e-300) {
                    std::ostringstream os;
                    os << "decay certificate falsified at radius " << r << " (|f| = " << fx << " > " << b << ")";
                    tail_reason = os.str();
                    tail_ok = false;
                    break;
                }
            }
        }
        if (tail_ok && !cert->decays_faster_than(d / alpha)) {
            std::ostringstream os;
            os << "decay exponent " << cert->eta << " does not exceed d/alpha = " << d / alpha;
            tail_reason = os.str();
            tail_ok = false;
        }
    }

    rep.in_L_alpha = local_a && tail_ok;
    rep.in_D_alpha = local_1 && tail_ok;
    if (rep.in_L_alpha) {
        try {
            rep.norm_pow = lp_pow(f, alpha, loose()).value;
        } catch (const std::exception&) {
            rep.norm_pow = la.value;
        }
    }
    if (rep.accepted(alpha)) {
        rep.verdict = alpha >= 1.0 ? integrand_class::in_L_alpha : integrand_class::in_D_alpha;
        return rep;
    }
    rep.verdict = integrand_class::rejected;
    if (!tail_ok) rep.reason = tail_reason;
    else if (!local_a) rep.reason = "integral of |f|^alpha diverges near " + std::to_string(la.worst);
    else rep.reason = "|f| is not locally integrable near " + std::to_string(l1.worst);
    return rep;
}

}  // namespace stablenoise
