#include "stablenoise/stable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stablenoise/errors.hpp"
#include "stablenoise/quadrature.hpp"

namespace stablenoise {

namespace {
constexpr double pi = std::numbers::pi;

double sgn(double x) { return (x > 0.0) - (x < 0.0); }
}  // namespace

stable_params::stable_params(double a, double s, double n) : alpha(a), sigma(s), nu(n) {
    if (!(a > 0.0 && a <= 2.0)) throw std::invalid_argument("stable_params: alpha must lie in (0,2]");
    if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("stable_params: sigma must be >= 0");
    if (!(std::abs(n) <= 1.0)) throw std::invalid_argument("stable_params: |nu| must be <= 1");
    if (a == 1.0 && n != 0.0) throw std::invalid_argument("stable_params: nu must be 0 when alpha = 1");
    if (a == 2.0) nu = 0.0;
}

std::complex<double> stable_char_fn(double theta, const stable_params& p) {
    if (theta == 0.0 || p.sigma == 0.0) return {1.0, 0.0};
    const double mag = std::pow(p.sigma * std::abs(theta), p.alpha);
    double skew = 0.0;
    if (p.alpha != 1.0 && p.alpha != 2.0) skew = p.nu * sgn(theta) * std::tan(pi * p.alpha / 2.0);
    return std::exp(std::complex<double>(-mag, mag * skew));
}

double stable_standard(double alpha, double nu, double u, double w) {
    const double v = pi * (u - 0.5);
    if (alpha == 1.0) return std::tan(v);
    if (alpha == 2.0) return 2.0 * std::sin(v) * std::sqrt(w);
    const double t = nu * std::tan(pi * alpha / 2.0);
    const double b = std::atan(t) / alpha;
    const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
    const double cv = std::cos(v);
    const double a1 = std::sin(alpha * (v + b)) / std::pow(cv, 1.0 / alpha);
    const double a2 = std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
    return s * a1 * a2;
}

double draw_stable(const stable_params& p, counter_stream& s) {
    const double u = s.uniform();
    const double w = s.exponential();
    if (p.sigma == 0.0) return 0.0;
    return p.sigma * stable_standard(p.alpha, p.nu, u, w);
}

std::vector<double> sample_stable(const stable_params& p, std::size_t n, std::uint64_t seed,
                                  std::uint64_t stream) {
    if (n < 1) throw std::invalid_argument("sample_stable: n must be >= 1");
    std::vector<double> out(n);
    const philox_key key = derive_key(seed, stream);
    for (std::size_t i = 0; i < n; ++i) {
        counter_stream s(key, i, stream_tag::oracle);
        out[i] = draw_stable(p, s);
    }
    return out;
}

double stable_abs_moment(double alpha, double p, double nu) {
    if (!(p > 0.0)) throw std::invalid_argument("stable_abs_moment: p must be > 0");
    if (alpha == 2.0) return std::pow(2.0, p) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(pi);
    if (!(p < alpha)) throw std::invalid_argument("stable_abs_moment: need p < alpha");
    // Gamma(1-p) cos(p pi/2) written via reflection so p = 1 is regular
    const double denom = pi / (2.0 * std::tgamma(p) * std::sin(p * pi / 2.0));
    double c = std::tgamma(1.0 - p / alpha) / denom;
    if (alpha != 1.0 && nu != 0.0) {
        const double tau = nu * std::tan(pi * alpha / 2.0);
        c *= std::pow(1.0 + tau * tau, p / (2.0 * alpha)) * std::cos(p / alpha * std::atan(tau));
    }
    return c;
}

double sine_moment_integral(double a) {
    if (!(a > 0.0 && a < 2.0)) throw numerical_failure("sine moment integral diverges outside (0,2)");
    quad::options opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-14;
    const quad::fn1 f = [a](double t) { return std::pow(t, -a) * std::sin(t); };
    quad::result r = quad::power_singular(f, 0.0, pi, 1.0 - a, true, opt);
    r += quad::fourier_tail(pi, a, false, opt);
    if (!r.converged) throw numerical_failure("sine moment integral did not converge");
    return r.value;
}

double cosine_moment_integral(double a) {
    if (!(a > 1.0 && a < 3.0)) throw numerical_failure("cosine moment integral diverges outside (1,3)");
    quad::options opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-14;
    const quad::fn1 f = [a](double t) {
        const double h = t * 0.5;
        const double s = std::sin(h);
        return std::pow(t, -a) * 2.0 * s * s;
    };
    quad::result r = quad::power_singular(f, 0.0, pi, 2.0 - a, true, opt);
    const double flat = std::pow(pi, 1.0 - a) / (a - 1.0);
    const quad::result c = quad::fourier_tail(pi, a, true, opt);
    if (!r.converged || !c.converged) throw numerical_failure("cosine moment integral did not converge");
    return r.value + flat - c.value;
}

stable_params tail_to_params(const tail_spec& t) {
    if (!(t.alpha > 0.0 && t.alpha < 2.0)) throw numerical_failure("tail_to_params: alpha outside (0,2)");
    if (!(t.p >= 0.0 && t.q >= 0.0 && t.p + t.q > 0.0))
        throw std::invalid_argument("tail_to_params: need p, q >= 0 and p + q > 0");
    const double a = t.alpha;
    if (a == 1.0) {
        if (t.p != t.q) throw std::invalid_argument("tail_to_params: alpha = 1 requires p = q");
        return stable_params(1.0, (t.p + t.q) * pi / 2.0, 0.0);
    }
    const double is = sine_moment_integral(a);
    const double sa = (t.p + t.q) * is;
    const double sigma = std::pow(sa, 1.0 / a);
    // Skewness sign chosen so that a heavier right tail gives nu > 0 under
    // the characteristic function convention of stable_char_fn.
    double jc;
    if (a > 1.0)
        jc = -cosine_moment_integral(a);
    else
        jc = std::tgamma(1.0 - a) * std::sin(pi * a / 2.0);
    double nu = (t.p - t.q) * jc / (sa * std::tan(pi * a / 2.0));
    nu = std::clamp(nu, -1.0, 1.0);
    return stable_params(a, sigma, nu);
}

std::string to_string(innovation_mode m) {
    switch (m) {
        case innovation_mode::exact_stable: return "exact-stable";
        case innovation_mode::pareto_tail: return "pareto-tail";
        case innovation_mode::gaussian: return "gaussian";
    }
    return "unknown";
}

innovation_mode parse_innovation_mode(const std::string& s) {
    if (s == "exact-stable" || s == "exact" || s == "stable") return innovation_mode::exact_stable;
    if (s == "pareto-tail" || s == "pareto") return innovation_mode::pareto_tail;
    if (s == "gaussian" || s == "normal") return innovation_mode::gaussian;
    throw std::invalid_argument("unknown innovation mode: " + s);
}

innovation_sampler innovation_sampler::exact(const stable_params& p, std::uint64_t seed) {
    innovation_sampler s;
    s.mode_ = innovation_mode::exact_stable;
    s.seed_ = seed;
    s.limit_ = p;
    return s;
}

innovation_sampler innovation_sampler::pareto(const tail_spec& t, std::uint64_t seed) {
    innovation_sampler s;
    s.mode_ = innovation_mode::pareto_tail;
    s.seed_ = seed;
    s.tails_ = t;
    s.limit_ = tail_to_params(t);
    const double a = t.alpha;
    const double m = t.p + t.q;
    s.x0_ = m <= 0.5 ? 1.0 : std::pow(2.0 * m, 1.0 / a);
    const double scale = std::pow(s.x0_, -a);
    s.pr_ = t.p * scale;
    s.pl_ = t.q * scale;
    s.core_ = 1.0 - s.pr_ - s.pl_;
    if (a > 1.0) {
        const double tail_mean = (s.pr_ - s.pl_) * s.x0_ * a / (a - 1.0);
        s.shift_ = -tail_mean / s.core_;
    }
    return s;
}

innovation_sampler innovation_sampler::gaussian(double sigma, std::uint64_t seed) {
    innovation_sampler s;
    s.mode_ = innovation_mode::gaussian;
    s.seed_ = seed;
    s.limit_ = stable_params(2.0, sigma, 0.0);
    return s;
}

innovation_sampler make_innovation_sampler(innovation_mode mode, const stable_params& p, std::uint64_t seed) {
    switch (mode) {
        case innovation_mode::exact_stable: return innovation_sampler::exact(p, seed);
        case innovation_mode::gaussian:
            if (p.alpha != 2.0) throw std::invalid_argument("gaussian innovations require alpha = 2");
            return innovation_sampler::gaussian(p.sigma, seed);
        case innovation_mode::pareto_tail:
            throw std::invalid_argument("pareto-tail innovations are specified by tail constants");
    }
    throw std::invalid_argument("unknown innovation mode");
}

innovation_sampler make_innovation_sampler(innovation_mode mode, const tail_spec& t, std::uint64_t seed) {
    if (mode != innovation_mode::pareto_tail)
        throw std::invalid_argument("tail constants only apply to pareto-tail innovations");
    return innovation_sampler::pareto(t, seed);
}

double innovation_sampler::draw(counter_stream& s) const {
    switch (mode_) {
        case innovation_mode::exact_stable: return draw_stable(limit_, s);
        case innovation_mode::gaussian: return std::sqrt(2.0) * limit_.sigma * s.normal();
        case innovation_mode::pareto_tail: {
            const double sel = s.uniform();
            const double v = s.uniform();
            if (sel < pr_) return x0_ * std::pow(v, -1.0 / tails_.alpha);
            if (sel < pr_ + pl_) return -x0_ * std::pow(v, -1.0 / tails_.alpha);
            return x0_ * (2.0 * v - 1.0) + shift_;
        }
    }
    return 0.0;
}

double innovation_sampler::at(std::span<const std::int64_t> k, std::uint64_t replica) const {
    counter_stream s(derive_key(seed_, replica), pack_index(k), stream_tag::innovation);
    return draw(s);
}

double innovation_sampler::at_packed(philox_key key, std::uint64_t packed, stream_tag tag) const {
    counter_stream s(key, packed, tag);
    return draw(s);
}

double innovation_sampler::at1(std::int64_t k, std::uint64_t replica) const {
    return at(std::span<const std::int64_t>(&k, 1), replica);
}

bool innovation_sampler::symmetric() const {
    switch (mode_) {
        case innovation_mode::exact_stable: return limit_.nu == 0.0;
        case innovation_mode::gaussian: return true;
        case innovation_mode::pareto_tail: return tails_.p == tails_.q;
    }
    return false;
}

std::complex<double> innovation_sampler::char_fn(double u) const {
    switch (mode_) {
        case innovation_mode::exact_stable: return stable_char_fn(u, limit_);
        case innovation_mode::gaussian: return stable_char_fn(u, limit_);
        case innovation_mode::pareto_tail: break;
    }
    if (u == 0.0) return {1.0, 0.0};
    const double a = tails_.alpha;
    const double au = std::abs(u);
    const double arg = au * x0_;
    const double sinc = std::sin(arg) / arg;
    std::complex<double> core = core_ * sinc * std::exp(std::complex<double>(0.0, u * shift_));
    quad::options opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-15;
    const double c = quad::fourier_tail(arg, a + 1.0, true, opt).value;
    const double s = quad::fourier_tail(arg, a + 1.0, false, opt).value;
    const double pref = a * std::pow(au, a);
    return core + std::complex<double>(pref * (tails_.p + tails_.q) * c, sgn(u) * pref * (tails_.p - tails_.q) * s);
}

}  // namespace stablenoise
