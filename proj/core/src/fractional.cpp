#include "stablenoise/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stablenoise/errors.hpp"
#include "stablenoise/grid_ops.hpp"
#include "stablenoise/quadrature.hpp"

namespace stablenoise {

namespace {

quad::options tight() {
    quad::options o;
    o.abs_tol = 1e-13;
    o.rel_tol = 1e-11;
    o.max_intervals = 400;
    return o;
}

// inner integrals of nested quadratures
quad::options inner_opts() {
    quad::options o;
    o.abs_tol = 1e-12;
    o.rel_tol = 1e-10;
    o.max_intervals = 200;
    return o;
}

void require_1d(const kernel& f) {
    if (f.dim() != 1) throw std::invalid_argument("fractional noise is implemented for d = 1");
}

double support_scale(const kernel& f) {
    if (f.support()) return std::max(1.0, f.support()->hi[0] - f.support()->lo[0]);
    return f.decay() ? std::max(1.0, f.decay()->radius) : 1.0;
}

// Breakpoints of f inside the support (or the certificate core).
std::vector<double> f_points(const kernel& f) {
    std::vector<double> pts = f.breakpoints()[0];
    if (f.support()) {
        pts.push_back(f.support()->lo[0]);
        pts.push_back(f.support()->hi[0]);
    } else if (f.decay()) {
        pts.push_back(-f.decay()->radius);
        pts.push_back(f.decay()->radius);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// int_a^inf h for h ~ x^-decay: x = a + s (u^-g - 1) with g = 1 / (decay - 1)
// makes the integrand bounded near u = 0.
quad::result power_tail(const quad::fn1& h, double a, double s, double decay, const quad::options& o) {
    const double g = 1.0 / (decay - 1.0);
    const auto w = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double t = s * std::pow(u, -g);
        if (!std::isfinite(t)) return 0.0;
        return h(a + t - s) * g * t / u;
    };
    return quad::adaptive(w, 0.0, 1.0, o);
}

// int_-inf^b h, same substitution mirrored.
quad::result power_tail_left(const quad::fn1& h, double b, double s, double decay, const quad::options& o) {
    return power_tail([&](double x) { return h(-x); }, -b, s, decay, o);
}

}  // namespace

// int_a^b g for g ~ |z|^e near z = 0, with a, b on one side of 0: z = t^k
// with k = 1/(1+e) flattens the singularity even when it lies just outside.
static quad::result graded(const quad::fn1& g, double a, double b, double e, const quad::options& o) {
    const double k = 1.0 / (1.0 + e);
    if (b <= 0.0) return graded([&g](double z) { return g(-z); }, -b, -a, e, o);
    const quad::fn1 h = [&g, k](double t) {
        if (t <= 0.0) return 0.0;
        const double tk = std::pow(t, k);
        return k * (tk / t) * g(tk);
    };
    return quad::adaptive(h, std::pow(a, 1.0 / k), std::pow(b, 1.0 / k), o);
}

double fractional_convolution(const kernel& f, const homogeneous_profile& p, double x) {
    require_1d(f);
    // near x the integral runs in z = y - x so the singular point is exactly 0
    const auto gz = [&](double z) {
        const double v = f(x + z);
        return v == 0.0 ? 0.0 : v * p(z);
    };
    const auto gy = [&](double y) {
        const double v = f(y);
        return v == 0.0 ? 0.0 : v * p(y - x);
    };
    const quad::options o = inner_opts();
    std::vector<double> cuts = f_points(f);
    cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    quad::result r;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (f.support() && (b <= f.support()->lo[0] || a >= f.support()->hi[0])) continue;
        const double dist = std::min(std::abs(a - x), std::abs(b - x));
        if (dist < b - a) r += graded(gz, a - x, b - x, -p.beta, o);
        else r += quad::adaptive(gy, a, b, o);
    }
    if (!f.support()) {
        const double s = support_scale(f);
        double hi = cuts.back(), lo = cuts.front();
        // a tail starting at x opens with the singular slab
        if (hi == x) {
            r += graded(gz, 0.0, s, -p.beta, o);
            hi = x + s;
        }
        if (lo == x) {
            r += graded(gz, -s, 0.0, -p.beta, o);
            lo = x - s;
        }
        r += quad::to_infinity(gy, hi, s, o);
        r += quad::from_minus_infinity(gy, lo, s, o);
    }
    if (!std::isfinite(r.value)) throw numerical_failure("convolution with the profile diverges");
    return r.value;
}

stable_params fractional_eval_params(const kernel& f, const homogeneous_profile& p, const stable_params& params) {
    require_1d(f);
    const double a = params.alpha;
    if (!(p.beta > 0.0 && p.beta < 1.0)) throw std::invalid_argument("profile exponent must lie in (0, 1)");
    if (!(a * p.beta > 1.0)) throw numerical_failure("|f * p|^alpha is not integrable: alpha beta <= 1");
    const auto g = [&](double x) { return fractional_convolution(f, p, x); };
    const quad::options o = [] {
        quad::options q;
        q.abs_tol = 1e-10;
        q.rel_tol = 1e-9;
        q.max_intervals = 300;
        return q;
    }();
    std::vector<double> pts = f_points(f);
    if (pts.empty()) pts = {-1.0, 1.0};
    if (pts.size() == 1) pts.push_back(pts[0] + 1.0);
    const double span = std::max(1.0, pts.back() - pts.front());
    const bool bounded = f.support().has_value();
    const auto integrate_all = [&](bool sgn) {
        const auto h = [&](double x) {
            const double v = g(x);
            const double w = std::pow(std::abs(v), a);
            return sgn && v < 0.0 ? -w : w;
        };
        // |x - b|^(1 - beta) kinks at breakpoints of f
        const double e = -p.beta;
        quad::result r;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) r += quad::power_singular_both(h, pts[i], pts[i + 1], e, e, o);
        const double hi = pts.back() + span, lo = pts.front() - span;
        r += quad::power_singular(h, pts.back(), hi, e, true, o);
        r += quad::power_singular(h, lo, pts.front(), e, false, o);
        if (bounded) {
            r += power_tail(h, hi, span, a * p.beta, o);
            r += power_tail_left(h, lo, span, a * p.beta, o);
        } else {
            r += quad::to_infinity(h, hi, span, o);
            r += quad::from_minus_infinity(h, lo, span, o);
        }
        return r;
    };
    const quad::result ra = integrate_all(false);
    if (!std::isfinite(ra.value)) throw numerical_failure("integral of |f * p|^alpha diverges");
    if (ra.value <= 0.0) return stable_params(a, 0.0, a == 1.0 ? 0.0 : params.nu);
    double nu = 0.0;
    if (params.nu != 0.0 && a != 2.0) nu = std::clamp(params.nu * integrate_all(true).value / ra.value, -1.0, 1.0);
    return stable_params(a, std::pow(ra.value, 1.0 / a), nu);
}

std::vector<double> sample_fractional(const kernel& f, const homogeneous_profile& p, const stable_params& params,
                                      std::size_t n, std::uint64_t seed) {
    const stable_params s = fractional_eval_params(f, p, params);
    return sample_stable(s, n, seed);
}

double covariance_kernel(double x, double y, const homogeneous_profile& p) {
    if (!(p.beta > 0.5 && p.beta < 1.0)) throw numerical_failure("covariance kernel diverges unless 1/2 < beta < 1");
    if (x == y) throw numerical_failure("covariance kernel is infinite on the diagonal");
    // symmetric in (x, y); with w = z - x the singular points are 0 and L
    const double a = std::min(x, y);
    const double L = std::max(x, y) - a;
    const auto g = [&](double w) { return p(-w) * p(L - w); };
    // v = L - w near w = L, v = w - L beyond it
    const auto g_inner = [&](double v) { return p(v - L) * p(v); };
    const auto g_outer = [&](double v) { return p(-L - v) * p(-v); };
    const quad::options o = tight();
    quad::result r;
    r += power_tail_left(g, -L, L, 2.0 * p.beta, o);
    r += quad::power_singular(g, -L, 0.0, -p.beta, false, o);
    r += quad::power_singular(g, 0.0, 0.5 * L, -p.beta, true, o);
    r += quad::power_singular(g_inner, 0.0, 0.5 * L, -p.beta, true, o);
    r += quad::power_singular(g_outer, 0.0, L, -p.beta, true, o);
    r += power_tail(g, 2.0 * L, L, 2.0 * p.beta, o);
    if (!std::isfinite(r.value)) throw numerical_failure("covariance kernel quadrature failed");
    return r.value;
}

double covariance_quadratic_form(const kernel& f, const homogeneous_profile& p) {
    require_1d(f);
    if (!f.support()) throw std::invalid_argument("quadratic form needs a kernel with bounded support");
    const double kp = covariance_kernel(0.0, 1.0, p);   // y - x > 0
    const double km = covariance_kernel(0.0, -1.0, p);  // y - x < 0
    const double e = 1.0 - 2.0 * p.beta;
    std::vector<double> pts = f_points(f);
    const quad::options o = [] {
        quad::options q;
        q.abs_tol = 1e-13;
        q.rel_tol = 1e-11;
        return q;
    }();
    const auto inner = [&](double x) {
        const double fx = f(x);
        if (fx == 0.0) return 0.0;
        const auto g = [&](double y) {
            if (y == x) return 0.0;
            return f(y) * std::pow(std::abs(y - x), e) * (y > x ? kp : km);
        };
        quad::result r;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double a = pts[i], b = pts[i + 1];
            if (x <= a || x >= b) {
                r += quad::adaptive(g, a, b, o);
            } else {
                r += quad::power_singular(g, a, x, e, false, o);
                r += quad::power_singular(g, x, b, e, true, o);
            }
        }
        return fx * r.value;
    };
    quad::result outer;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) outer += quad::power_singular_both(inner, pts[i], pts[i + 1], e, e, o);
    return outer.value;
}

regvar_report regular_variation_check(const filter_spec& c, const homogeneous_profile& p) {
    if (c.dim() != 1) throw std::invalid_argument("regular variation check is implemented for d = 1");
    regvar_report r;
    for (double t : {1e1, 1e2, 1e3, 1e4}) {
        double e = 0.0;
        for (double x : {1.0, -1.0}) {
            const auto k = static_cast<std::int64_t>(std::floor(t * x));
            e = std::max(e, std::abs(std::pow(t, p.beta) * c.coeff1(k) - p(x)));
        }
        r.t.push_back(t);
        r.sup_error.push_back(e);
    }
    // errors at rounding level count as converged
    const double floor = 1e-12 * std::max(1.0, p.sphere_bound());
    r.pass = true;
    for (std::size_t i = 1; i < r.sup_error.size(); ++i)
        if (!(r.sup_error[i] < r.sup_error[i - 1] || r.sup_error[i] <= floor)) r.pass = false;
    return r;
}

double renormalize(double u, double h, const std::function<double(const kernel&)>& evaluator, const kernel& f) {
    if (!(h > 0.0)) throw std::invalid_argument("renormalize: h must be > 0");
    if (h == 1.0) return evaluator(f);
    return std::pow(h, u) * evaluator(f.dilate(h));
}

}  // namespace stablenoise
