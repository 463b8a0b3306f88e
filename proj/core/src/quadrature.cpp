#include "stablenoise/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace stablenoise::quad {

namespace {

constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.0};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct segment {
    double a, b, value, error;
    bool operator<(const segment& o) const { return error < o.error; }
};

segment gk15(const fn1& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * wgk[7];
    double resg = fc * wg[3];
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = hl * xgk[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
        resk += wgk[j] * (fv1[j] + fv2[j]);
        resabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += wg[j / 2] * (fv1[j] + fv2[j]);
    }
    const double mean = resk * 0.5;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    resasc *= std::abs(hl);
    resabs *= std::abs(hl);
    double err = std::abs((resk - resg) * hl);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps) err = std::max(eps * resabs, err);
    return {a, b, resk * hl, err};
}

}  // namespace

const gauss_rule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, gauss_rule> cache;
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    gauss_rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return cache.emplace(n, std::move(r)).first->second;
}

result adaptive(const fn1& f, double a, double b, const options& opt) {
    result out;
    if (a == b) return out;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::priority_queue<segment> heap;
    segment first = gk15(f, a, b);
    out.evaluations = 15;
    double total = first.value;
    double err = first.error;
    heap.push(first);
    int intervals = 1;
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (intervals >= opt.max_intervals) {
            out.converged = false;
            break;
        }
        segment s = heap.top();
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b) || (s.b - s.a) < 1e-14 * std::max(1.0, std::abs(mid))) {
            out.converged = s.error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) * 10;
            break;
        }
        heap.pop();
        segment l = gk15(f, s.a, mid);
        segment r = gk15(f, mid, s.b);
        out.evaluations += 30;
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
        ++intervals;
        if (intervals % 64 == 0) {
            // resum to limit drift from incremental updates
            auto copy = heap;
            total = 0.0;
            err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    double t = 0.0, e = 0.0;
    if (!heap.empty()) out.worst = 0.5 * (heap.top().a + heap.top().b);
    while (!heap.empty()) {
        t += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    out.value = sign * t;
    out.error = e;
    if (!std::isfinite(out.value)) out.converged = false;
    return out;
}

result adaptive_pieces(const fn1& f, std::span<const double> points, const options& opt) {
    result out;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (points[i + 1] > points[i]) out += adaptive(f, points[i], points[i + 1], opt);
    }
    return out;
}

result power_singular(const fn1& f, double a, double b, double e, bool left, const options& opt) {
    if (!(e > -1.0)) throw std::invalid_argument("power_singular: exponent must exceed -1");
    const double k = 1.0 / (1.0 + e);
    const double len = b - a;
    // Near a nonzero end the offset len t^k can be lost in rounding and f
    // hits its singularity; the transformed integrand is bounded there, so
    // such points take the value at t_min instead.
    const double end = left ? a : b;
    const double ulp = std::nextafter(std::abs(end), std::numeric_limits<double>::infinity()) - std::abs(end);
    const double t_min = end == 0.0 ? 0.0 : std::pow(64.0 * ulp / std::abs(len), 1.0 / k);
    const auto at = [&f, a, b, len, k, left](double t) {
        const double tk = std::pow(t, k);
        const double x = left ? a + len * tk : b - len * tk;
        return len * k * (tk / t) * f(x);
    };
    fn1 g = [at, t_min](double t) {
        if (t <= 0.0) return 0.0;
        const double v = at(t);
        if (std::isfinite(v) || t >= t_min || t_min == 0.0) return v;
        return at(t_min);
    };
    return adaptive(g, 0.0, 1.0, opt);
}

result power_singular_both(const fn1& f, double a, double b, double ea, double eb, const options& opt) {
    const double m = 0.5 * (a + b);
    result r = power_singular(f, a, m, ea, true, opt);
    r += power_singular(f, m, b, eb, false, opt);
    return r;
}

result to_infinity(const fn1& f, double a, double scale, const options& opt) {
    result out;
    if (!(scale > 0.0)) scale = 1.0;
    double lo = a;
    double width = scale;
    double prev = 0.0, prev2 = 0.0;
    int small_run = 0;
    for (int j = 0; j < 200; ++j) {
        const double hi = lo + width;
        result piece = adaptive(f, lo, hi, opt);
        out += piece;
        const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
        if (std::abs(piece.value) <= tol) {
            if (++small_run >= 3) return out;
        } else {
            small_run = 0;
        }
        if (j >= 24) {
            // geometric remainder for power-law tails
            const double r1 = piece.value / prev;
            const double r2 = prev / prev2;
            if (std::isfinite(r1) && r1 > 0.0 && r1 < 1.0 && std::abs(r1 - r2) < 1e-3 * (1.0 - r1)) {
                const double rem = piece.value * r1 / (1.0 - r1);
                out.value += rem;
                out.error += std::abs(rem) * std::abs(r1 - r2) / (1.0 - r1) + std::abs(rem) * 1e-6;
                return out;
            }
        }
        prev2 = prev;
        prev = piece.value;
        lo = hi;
        width *= 2.0;
    }
    out.converged = false;
    return out;
}

result from_minus_infinity(const fn1& f, double b, double scale, const options& opt) {
    return to_infinity([&f, b](double t) { return f(2.0 * b - t); }, b, scale, opt);
}

result fourier_tail(double a, double s, bool cosine, const options& opt) {
    if (!(a > 0.0) || !(s > 0.0)) throw std::invalid_argument("fourier_tail: need a > 0 and s > 0");
    const double two_pi = 2.0 * std::numbers::pi;
    const double T = a + two_pi * 40.0;
    auto g = [s, cosine](double y) { return std::pow(y, -s) * (cosine ? std::cos(y) : std::sin(y)); };
    result out;
    // one panel per period keeps the integrand tame for the adaptive rule
    double lo = a;
    while (lo < T) {
        const double hi = std::min(T, lo + two_pi);
        // panels nearly cancel; measure the error against int |g| instead
        options po = opt;
        po.abs_tol = std::max(opt.abs_tol, opt.rel_tol * 4.0 * std::pow(lo, -s));
        out += adaptive(g, lo, hi, po);
        lo = hi;
    }
    // asymptotic expansion: int_T^inf y^-s e^{iy} dy = e^{iT} sum_n i^{n+1} g^(n)(T)
    std::complex<double> sum = 0.0;
    std::complex<double> ipow(0.0, 1.0);
    double deriv = std::pow(T, -s);
    double last = std::abs(deriv);
    for (int n = 0; n < 60; ++n) {
        const std::complex<double> term = ipow * deriv;
        sum += term;
        const double next = -deriv * (s + n) / T;
        if (std::abs(next) > last) break;
        if (std::abs(next) < 1e-18 * std::abs(sum)) break;
        last = std::abs(next);
        deriv = next;
        ipow *= std::complex<double>(0.0, 1.0);
    }
    const std::complex<double> tail = std::exp(std::complex<double>(0.0, T)) * sum;
    out.value += cosine ? tail.real() : tail.imag();
    return out;
}

}  // namespace stablenoise::quad
