// Acceptance checks 1-12. Each prints one PASS/FAIL line, followed by
// indented detail lines. Usage: acceptance [--criterion N]...
#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "stablenoise/filter.hpp"
#include "stablenoise/fractional.hpp"
#include "stablenoise/grid_noise.hpp"
#include "stablenoise/grid_ops.hpp"
#include "stablenoise/levy.hpp"
#include "stablenoise/parallel.hpp"
#include "stablenoise/parser.hpp"
#include "stablenoise/shot_noise.hpp"
#include "stablenoise/space.hpp"
#include "stablenoise/verify.hpp"

using namespace stablenoise;

namespace {

constexpr double pi = std::numbers::pi;

// tolerances
constexpr double tol_idempotent = 1e-10;
constexpr double tol_norm_identity = 1e-12;
constexpr double tol_scaling = 1e-10;
constexpr double tol_variance_4 = 0.01;
constexpr double tol_error_bound = 0.05;
constexpr double se_band = 3.0;
constexpr double tol_char_distance = 0.02;
constexpr double level = 0.01;
constexpr double tol_translation = 1e-8;
constexpr double tol_self_similar = 1e-6;
constexpr double tol_double_route = 1e-4;
constexpr double tol_sphere_var = 0.05;
constexpr double tol_chentsov_const = 0.05;
constexpr double tol_chentsov_scale = 0.10;
constexpr double seconds_1 = 10.0;
constexpr double seconds_2 = 10.0;
constexpr double seconds_4 = 60.0;

constexpr std::size_t n_replicas = 100000;

struct outcome {
    bool pass = true;
    std::vector<std::string> details;

    void check(bool ok, const std::string& what) {
        if (!ok) pass = false;
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void info(const std::string& what) { details.push_back("info " + what); }
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

std::string join(const std::vector<double>& v, const char* f = "%.5f") {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(f, v[i]);
    return s + "]";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// random polynomial times Gaussian in d = 1
kernel random_smooth_kernel(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), w(0.5, 3.0), s(-1.0, 1.0);
    const std::string e = fmt("(%.6f + %.6f*x + %.6f*x*x)*exp(-%.6f*(x - %.4f)*(x - %.4f))", u(rng), u(rng), u(rng),
                              w(rng), s(rng) * 0.5, 0.0);
    return parse_kernel(e, 1);
}

// ---------------------------------------------------------------- 1
outcome criterion_1() {
    outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    std::uniform_int_distribution<int> dimd(1, 2), len(1, 12), off(-6, 6);
    const double hs[] = {0.05, 0.1, 0.25, 0.3, 0.5, 1.0};

    // psi_h o phi_h = Id
    int exact = 0;
    double worst_norm = 0.0;
    for (int c = 0; c < 100; ++c) {
        const int d = dimd(rng);
        std::vector<std::int64_t> lo(d), hi(d);
        for (int i = 0; i < d; ++i) {
            lo[i] = off(rng);
            hi[i] = lo[i] + len(rng);
        }
        const double h = hs[c % 6];
        index_window w(lo, hi);
        std::vector<double> vals(w.size());
        for (double& v : vals) v = U(rng);
        cell_array u(h, w, vals);
        const cell_array back = psi_h(phi_h(u), grid_spec(h, w));
        bool same = back.size() == u.size();
        for (std::size_t i = 0; same && i < u.size(); ++i) same = back.values()[i] == u.values()[i];
        exact += same;
        const double alpha = 0.5 + 1.5 * (c % 7) / 6.0;
        const double lhs = lp_pow(phi_h(u), alpha).value;
        const double rhs = std::pow(h, d) * u.lp_pow(alpha);
        worst_norm = std::max(worst_norm, rel(lhs, rhs));
    }
    o.check(exact == 100, fmt("psi_h(phi_h(u)) == u bit-exact in %d/100 cases", exact));
    o.check(worst_norm <= tol_norm_identity,
            fmt("||phi_h u||^a = h^d ||u||^a, worst relative gap %.2e (tol %.0e)", worst_norm, tol_norm_identity));

    double worst_idem = 0.0;
    for (int c = 0; c < 100; ++c) {
        const kernel f = random_smooth_kernel(rng);
        const double h = hs[c % 6] * 0.5;
        grid_spec g(1, h);
        g.window = g.cover(box({-6.0}, {6.0}));
        const kernel once = tilde_psi_h(f, g);
        const cell_array a = psi_h(once, g);
        const cell_array b = psi_h(f, g);
        double scale = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            scale = std::max(scale, std::abs(b.values()[i]));
            diff = std::max(diff, std::abs(a.values()[i] - b.values()[i]));
        }
        worst_idem = std::max(worst_idem, diff / scale);
    }
    o.check(worst_idem <= tol_idempotent,
            fmt("psi~_h idempotent, worst relative gap %.2e (tol %.0e)", worst_idem, tol_idempotent));
    const double t = seconds_since(t0);
    o.check(t < seconds_1, fmt("runtime %.2f s (limit %.0f s)", t, seconds_1));
    return o;
}

// ---------------------------------------------------------------- 2
outcome criterion_2() {
    outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> cd(0.25, 4.0), hd(0.05, 0.5), pos(-1.0, 1.0), wid(0.2, 2.0);
    const double alphas[] = {0.7, 1.0, 1.5, 2.0};
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double a = alphas[i % 4];
        const double c = cd(rng), h = hd(rng);
        kernel f;
        if (i % 2 == 0) {
            const double lo = pos(rng);
            f = parse_kernel(fmt("indicator(box(%.6f,%.6f))", lo, lo + wid(rng)), 1);
        } else {
            f = parse_kernel(fmt("exp(-%.6f*(x - %.6f)*(x - %.6f))", wid(rng), 0.3, 0.3), 1);
        }
        grid_noise noise(grid_spec(1, h), innovation_sampler::exact(stable_params(a, 1.0, 0.0), 17 + i));
        const auto [lhs, rhs] = scaling_transport(noise, f, c, static_cast<std::uint64_t>(i));
        worst = std::max(worst, rel(lhs, rhs));
    }
    o.check(worst <= tol_scaling, fmt("mu_h[f(c.)] = c^(-d/a) mu_ch[f], worst relative gap %.2e over 50 triples", worst));
    const double t = seconds_since(t0);
    o.check(t < seconds_2, fmt("runtime %.2f s (limit %.0f s)", t, seconds_2));
    return o;
}

// ---------------------------------------------------------------- 3
outcome criterion_3() {
    outcome o;
    const kernel f = parse_kernel("cos(18*x)*exp(-x*x/2)", 1);
    const std::vector<double> hs = {0.5, 0.1, 0.02};
    for (double a : {0.7, 1.0, 1.5, 2.0}) {
        const auto t0 = std::chrono::steady_clock::now();
        const innovation_sampler G = a < 2.0 ? innovation_sampler::pareto(tail_spec{a, 0.5, 0.5}, 3000 + int(a * 10))
                                             : innovation_sampler::gaussian(1.0, 3020);
        const stable_params target = integral_params(f, a, G.limit().nu);
        const std::vector<double> ref = sample_stable(target, n_replicas, 3100 + int(a * 10));
        std::vector<double> ks, pv;
        for (double h : hs) {
            grid_noise noise(grid_spec(1, h), G);
            const noise_functional nf = noise.prepare(f);
            const auto x = replicate(n_replicas, 0, [&](std::uint64_t r) { return nf.eval(G, r); });
            const ks_result k = ks_two_sample(x, ref);
            ks.push_back(k.statistic);
            pv.push_back(k.pvalue);
        }
        o.check(strictly_decreasing(ks), fmt("alpha=%.1f %s innovations: KS %s decreasing", a, to_string(G.mode()).c_str(), join(ks).c_str()));
        o.check(pv.back() >= level, fmt("alpha=%.1f: p-value at h=0.02 is %.4f (level %.2f); %.1f s", a, pv.back(), level, seconds_since(t0)));
        if (pv.back() < level && a < 2.0) {
            // same study with exact stable innovations isolates the grid error
            const innovation_sampler E = innovation_sampler::exact(stable_params(a, 1.0, 0.0), 3200);
            grid_noise noise(grid_spec(1, hs.back()), E);
            const noise_functional nf = noise.prepare(f);
            const auto x = replicate(n_replicas, 0, [&](std::uint64_t r) { return nf.eval(E, r); });
            const ks_result k = ks_two_sample(x, sample_stable(integral_params(f, a, 0.0), n_replicas, 3300));
            o.info(fmt("alpha=%.1f with exact stable innovations at h=0.02: KS %.5f, p %.4f", a, k.statistic, k.pvalue));
        }
    }
    return o;
}

// ---------------------------------------------------------------- 4
outcome criterion_4() {
    outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const kernel f = parse_kernel("indicator(box(0,1))", 1);
    const innovation_sampler G = innovation_sampler::gaussian(1.0, 4000);
    grid_noise noise(grid_spec(1, 0.25), G);
    const noise_functional nf = noise.prepare(f);
    const std::size_t n = 1000000;
    const auto x = replicate(n, 0, [&](std::uint64_t r) { return nf.eval(G, r); });
    grid_spec g(1, 0.25);
    g.window = g.cover(box({0.0}, {1.0}));
    const double target = 2.0 * lp_pow(tilde_psi_h(f, g), 2.0).value;
    const double v = describe(x).variance;
    o.check(rel(v, target) <= tol_variance_4, fmt("variance %.5f vs 2||psi~_h f||^2 = %.5f, relative gap %.4f (tol %.2f)", v, target, rel(v, target), tol_variance_4));
    const double t = seconds_since(t0);
    o.check(t < seconds_4, fmt("runtime %.2f s (limit %.0f s)", t, seconds_4));
    return o;
}

// ---------------------------------------------------------------- 5
outcome criterion_5() {
    outcome o;
    const kernel f = parse_kernel("exp(-x*x)", 1);
    const kernel fM = parse_kernel("exp(-x*x)*indicator(box(-2,2))", 1);
    const std::pair<double, double> cases[] = {{2.0, 1.0}, {1.5, 1.0}, {1.2, 0.8}};
    for (const auto& [a, p] : cases) {
        const coupled_error_report r = coupled_error_study(f, fM, 0.1, p, stable_params(a, 1.0, 0.0), n_replicas, 5000, 16, 0);
        o.check(std::abs(r.ratio - 1.0) <= tol_error_bound,
                fmt("alpha=%.1f p=%.1f: empirical %.6f (se %.6f) vs bound %.6f, ratio %.4f (tol %.2f)", a, p, r.empirical,
                    r.std_error, r.bound, r.ratio, tol_error_bound));
        if (2.0 * p >= a)
            o.info(fmt("alpha=%.1f p=%.1f: |D|^p has tail index %.2f, so the sample mean has infinite variance and the "
                       "standard error above understates its spread (fluctuations shrink like n^%.2f)",
                       a, p, a / p, p / a - 1.0));
    }
    return o;
}

// ---------------------------------------------------------------- 6
outcome criterion_6() {
    outcome o;
    const auto E = make_box_space(box::cube(1, 0.0, 1.0));
    const innovation_sampler G = innovation_sampler::pareto(tail_spec{1.5, 0.1, 0.1}, 6000);
    const space_fn f = [](std::span<const double>) { return 1.0; };
    const stable_params target = integral_params(*E, f, 1.5, G.limit().nu);
    const auto target_cf = [&](double t) { return stable_char_fn(t, target); };
    const std::vector<double> thetas = {0.25, 0.5, 1.0, 2.0, 4.0};
    const std::vector<double> schedule = {10.0, 100.0, 1000.0};

    for (int binomial = 0; binomial < 2; ++binomial) {
        const char* name = binomial ? "binomial" : "poisson";
        std::vector<double> dist;
        for (double s : schedule) {
            const auto x = replicate(n_replicas, 0, [&](std::uint64_t r) {
                return binomial ? binomial_noise_eval(*E, static_cast<std::size_t>(s), G, f, r)
                                : shot_noise_eval(sample_poisson_cloud(*E, s, G, r), f);
            });
            dist.push_back(char_distance(x, target_cf, thetas));
            if (s == schedule.front()) {
                double worst = 0.0;
                for (double t : thetas) {
                    const std::complex<double> exact = binomial ? binomial_char_fn(*E, static_cast<std::size_t>(s), G, f, t)
                                                                : shot_noise_char_fn(*E, s, G, f, t);
                    const double se = std::sqrt((1.0 - std::norm(exact)) / static_cast<double>(x.size()));
                    worst = std::max(worst, std::abs(empirical_char_fn(x, t) - exact) / se);
                }
                o.check(worst <= se_band, fmt("%s: finite-size char fn identity at %g, worst gap %.2f standard errors (tol %.0f)", name, s, worst, se_band));
            }
        }
        o.check(strictly_decreasing(dist), fmt("%s: char distance %s decreasing over %s", name, join(dist).c_str(), join(schedule, "%g").c_str()));
        o.check(dist.back() <= tol_char_distance, fmt("%s: char distance %.5f at 1000 (tol %.2f)", name, dist.back(), tol_char_distance));
    }
    return o;
}

// ---------------------------------------------------------------- 7
outcome criterion_7() {
    outcome o;
    const kernel f = parse_kernel("exp(-5*x*x)", 1);
    const filter_spec c = filter_spec::geometric(0.5, 40);
    const double C = c.sum();
    o.info(fmt("geometric filter 2^-|k|, |k| <= 40, C = %.12f", C));
    for (double a : {1.5, 2.0}) {
        const innovation_sampler G = a < 2.0 ? innovation_sampler::exact(stable_params(a, 1.0, 0.0), 7000)
                                             : innovation_sampler::gaussian(1.0, 7001);
        const stable_params sf = integral_params(f, a, 0.0);
        const std::vector<double> ref = sample_stable(stable_params(a, C * sf.sigma, sf.nu), n_replicas, 7100 + int(a));
        std::vector<double> ks, pv;
        for (double h : {0.5, 0.1, 0.02}) {
            grid_noise noise(grid_spec(1, h), G);
            const noise_functional nf = noise.prepare_filtered(f, c);
            const auto x = replicate(n_replicas, 0, [&](std::uint64_t r) { return nf.eval(G, r); });
            const ks_result k = ks_two_sample(x, ref);
            ks.push_back(k.statistic);
            pv.push_back(k.pvalue);
        }
        o.check(strictly_decreasing(ks), fmt("alpha=%.1f: KS %s decreasing over h = 0.5, 0.1, 0.02", a, join(ks).c_str()));
        o.check(pv.back() >= level, fmt("alpha=%.1f: p-value at h=0.02 is %.4f (level %.2f)", a, pv.back(), level));
    }
    return o;
}

// ---------------------------------------------------------------- 8
outcome criterion_8() {
    outcome o;
    const kernel f = parse_kernel("indicator(box(0,1))", 1);
    homogeneous_profile p;
    p.beta = 0.8;
    const stable_params params(1.5, 1.0, 0.0);
    const filter_spec c = filter_spec::power(p, 100, 1.0);
    const innovation_sampler G = innovation_sampler::exact(params, 8000);
    const stable_params lim = fractional_eval_params(f, p, params);
    const std::vector<double> ref = sample_fractional(f, p, params, n_replicas, 8100);
    o.info(fmt("limit scale %.6f", lim.sigma));
    std::vector<double> ks, pv;
    for (double h : {0.5, 0.2, 0.1}) {
        grid_noise noise(grid_spec(1, h), G);
        const noise_functional nf = noise.prepare_filtered(f, c);
        const auto x = replicate(n_replicas, 0, [&](std::uint64_t r) { return nf.eval(G, r); });
        const ks_result k = ks_two_sample(x, ref);
        ks.push_back(k.statistic);
        pv.push_back(k.pvalue);
    }
    o.check(strictly_decreasing(ks), fmt("KS %s decreasing over h = 0.5, 0.2, 0.1", join(ks).c_str()));
    o.info(fmt("p-values %s", join(pv, "%.2e").c_str()));
    return o;
}

// ---------------------------------------------------------------- 9
outcome criterion_9() {
    outcome o;
    const kernel f = parse_kernel("indicator(box(0,1))", 1);
    homogeneous_profile p;
    p.beta = 0.8;
    p.plus = 1.0;
    p.minus = 0.6;
    const stable_params params(1.5, 1.0, 0.4);

    const stable_params base = fractional_eval_params(f, p, params);
    double worst_s = 0.0, worst_n = 0.0;
    for (double tau : {0.37, -2.5, 11.0}) {
        const stable_params moved = fractional_eval_params(f.translate(tau), p, params);
        worst_s = std::max(worst_s, rel(moved.sigma, base.sigma));
        worst_n = std::max(worst_n, std::abs(moved.nu - base.nu));
    }
    o.check(worst_s <= tol_translation && worst_n <= tol_translation,
            fmt("translation: worst sigma gap %.2e, nu gap %.2e (tol %.0e)", worst_s, worst_n, tol_translation));

    const double u = 1.0 / params.alpha - p.beta + 1.0;
    const auto sigma_of = [&](const kernel& g) { return fractional_eval_params(g, p, params).sigma; };
    double worst_ss = 0.0;
    for (double h : {0.5, 2.0, 3.7}) worst_ss = std::max(worst_ss, rel(renormalize(u, h, sigma_of, f), base.sigma));
    o.check(worst_ss <= tol_self_similar, fmt("self-similarity h^u sigma((f(h.))*p) = sigma(f*p), worst gap %.2e (tol %.0e)", worst_ss, tol_self_similar));

    homogeneous_profile q;
    q.beta = 0.75;
    const stable_params s2 = fractional_eval_params(f, q, stable_params(2.0, 1.0, 0.0));
    const double form = covariance_quadratic_form(f, q);
    const double stated = form / 2.0;
    const double sigma2 = s2.sigma * s2.sigma;
    o.check(rel(sigma2, stated) <= tol_double_route,
            fmt("alpha=2: sigma^2 = %.8f vs int int f K f / 2 = %.8f, relative gap %.2e (tol %.0e)", sigma2, stated, rel(sigma2, stated), tol_double_route));
    o.info(fmt("sigma^2 / int int f K f = %.8f; variance 2 sigma^2 = %.8f", sigma2 / form, 2.0 * sigma2));
    return o;
}

// ---------------------------------------------------------------- 10
sphere_point at_angle(double th) { return {std::sin(th), 0.0, std::cos(th)}; }

outcome criterion_10() {
    outcome o;
    const sphere_point O = north_pole(2);
    const double lambda = 1000.0;
    {
        const innovation_sampler G = innovation_sampler::exact(stable_params(1.5, 1.0, 0.0), 10000);
        bool zero = true;
        for (std::uint64_t r = 0; r < 200; ++r) zero = zero && sphere_levy({O, at_angle(1.0)}, O, lambda, G, r)[0] == 0.0;
        o.check(zero, "B(O) = 0 exactly on 200 replicas");
    }
    // pairs (m, m') with d = pi/6 and d = pi/2
    const std::vector<sphere_point> pts = {at_angle(pi / 6), O, at_angle(pi / 2), {0.0, 1.0, 0.0}};
    const innovation_sampler G2 = innovation_sampler::gaussian(1.0, 10100);
    std::vector<double> rows(n_replicas * 2);
    parallel_for(n_replicas, 0, [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
            const auto v = sphere_levy(pts, O, lambda, G2, r);
            rows[2 * r] = v[0] - v[1];
            rows[2 * r + 1] = v[2] - v[3];
        }
    });
    const double dists[] = {pi / 6, pi / 2};
    for (int j = 0; j < 2; ++j) {
        std::vector<double> x(n_replicas);
        for (std::size_t r = 0; r < n_replicas; ++r) x[r] = rows[2 * r + j];
        const double v = describe(x).variance;
        o.check(rel(v, dists[j]) <= tol_sphere_var,
                fmt("alpha=2: Var(B(m)-B(m')) = %.5f vs d(m,m') = %.5f, relative gap %.3f (tol %.2f)", v, dists[j], rel(v, dists[j]), tol_sphere_var));
        o.info(fmt("ratio Var / (2 d) = %.4f", v / (2.0 * dists[j])));
    }
    const innovation_sampler G = innovation_sampler::exact(stable_params(1.5, 1.0, 0.0), 10200);
    const sphere_point m = at_angle(pi / 2);
    const auto x = replicate(n_replicas, 0, [&](std::uint64_t r) { return sphere_levy({m}, O, lambda, G, r)[0]; });
    const auto S = make_sphere_space(2);
    const stable_params lim = integral_params(*S, [&](std::span<const double> s) { return std::sqrt(pi) * symdiff_indicator(O, m, s); }, 1.5, 0.0);
    const ks_result k = ks_two_sample(x, sample_stable(lim, n_replicas, 10300));
    o.check(k.pvalue >= level, fmt("alpha=1.5 marginal at d=pi/2: KS %.5f, p %.4f vs S(%.5f, 0) (level %.2f)", k.statistic, k.pvalue, lim.sigma, level));
    return o;
}

// ---------------------------------------------------------------- 11
outcome criterion_11() {
    outcome o;
    const double lambda = 1000.0;
    const std::size_t n = 20000;
    const std::vector<std::vector<double>> pts = {{0.0, 0.0}, {0.5, 0.0}, {0.0, 1.0}, {-1.2, 1.6}};
    const double norms[] = {0.5, 1.0, 2.0};
    const innovation_sampler G = innovation_sampler::gaussian(1.0, 11000);
    std::vector<double> rows(n * pts.size());
    parallel_for(n, 0, [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
            const auto v = chentsov_levy(pts, lambda, G, r);
            std::copy(v.begin(), v.end(), rows.begin() + static_cast<std::ptrdiff_t>(r * pts.size()));
        }
    });
    bool zero = true;
    for (std::size_t r = 0; r < n; ++r) zero = zero && rows[r * pts.size()] == 0.0;
    o.check(zero, fmt("B(0) = 0 exactly on %zu replicas", n));
    double v[3], num = 0.0, den = 0.0;
    for (int j = 0; j < 3; ++j) {
        std::vector<double> x(n);
        for (std::size_t r = 0; r < n; ++r) x[r] = rows[r * pts.size() + 1 + j];
        v[j] = describe(x).variance;
        num += v[j] * norms[j];
        den += norms[j] * norms[j];
    }
    const double c = num / den;
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) worst = std::max(worst, rel(v[j] / norms[j], c));
    o.check(worst <= tol_chentsov_const, fmt("alpha=2: Var/|m| = %s, fitted constant %.5f, worst gap %.3f (tol %.2f)",
                                             join({v[0] / norms[0], v[1] / norms[1], v[2] / norms[2]}).c_str(), c, worst, tol_chentsov_const));
    o.info(fmt("measure of V_m per unit |m| under the implemented normalisation: %.5f, so 2 x that = %.5f", chentsov_mass(2, 1.0), 2.0 * chentsov_mass(2, 1.0)));

    const innovation_sampler S = innovation_sampler::exact(stable_params(1.5, 1.0, 0.0), 11100);
    std::vector<double> a(n), b(n);
    parallel_for(n, 0, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
            const auto val = chentsov_levy({{0.5, 0.0}, {2.0, 0.0}}, lambda, S, r);
            a[r] = val[0];
            b[r] = val[1];
        }
    });
    const double ratio = median_abs(b) / median_abs(a);
    const double want = std::pow(4.0, 1.0 / 1.5);
    o.check(rel(ratio, want) <= tol_chentsov_scale, fmt("alpha=1.5: scale ratio B(4m)/B(m) = %.4f vs 4^(1/alpha) = %.4f (tol %.2f)", ratio, want, tol_chentsov_scale));
    return o;
}

// ---------------------------------------------------------------- 12
outcome criterion_12() {
    outcome o;
    const std::size_t n = 2000;
    const kernel f = parse_kernel("exp(-x*x)", 1);
    const innovation_sampler G = innovation_sampler::exact(stable_params(1.5, 1.0, 0.2), 12000);
    grid_noise noise(grid_spec(1, 0.1), G);
    const noise_functional nf = noise.prepare(f);
    const auto E = make_box_space(box::cube(1, 0.0, 1.0));
    const space_fn g = [](std::span<const double> x) { return std::sin(3.0 * x[0]); };
    const sphere_point O = north_pole(2);
    const std::vector<sphere_point> pts = {at_angle(0.4), at_angle(2.0)};
    const innovation_sampler S = innovation_sampler::exact(stable_params(1.5, 1.0, 0.0), 12001);

    const auto run = [&](int threads) {
        replica_set rs;
        rs.columns = {"grid", "shot", "sphere0", "sphere1"};
        rs.values.resize(n * 4);
        parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t r = b; r < e; ++r) {
                rs.values[4 * r] = nf.eval(G, r);
                rs.values[4 * r + 1] = shot_noise_eval(sample_poisson_cloud(*E, 50.0, G, r), g);
                const auto v = sphere_levy(pts, O, 100.0, S, r);
                rs.values[4 * r + 2] = v[0];
                rs.values[4 * r + 3] = v[1];
            }
        });
        return rs.to_csv();
    };
    const std::string ref = run(1);
    for (int t : {2, 3, 8}) o.check(run(t) == ref, fmt("CSV with %d threads byte-identical to 1 thread (%zu bytes)", t, ref.size()));
    return o;
}

using criterion_fn = outcome (*)();

struct entry {
    int id;
    const char* title;
    criterion_fn fn;
};

const entry criteria[] = {
    {1, "operator identities", criterion_1},
    {2, "pathwise scaling", criterion_2},
    {3, "grid convergence", criterion_3},
    {4, "gaussian variance", criterion_4},
    {5, "error bound", criterion_5},
    {6, "shot-noise convergence", criterion_6},
    {7, "filtering, summable case", criterion_7},
    {8, "filtering, regularly varying case", criterion_8},
    {9, "fractional parameter identities", criterion_9},
    {10, "sphere Levy motion", criterion_10},
    {11, "Chentsov field", criterion_11},
    {12, "determinism across thread counts", criterion_12},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) wanted.push_back(std::atoi(argv[++i]));
        else {
            std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
            return 2;
        }
    }
    bool all_pass = true;
    for (const entry& e : criteria) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), e.id) == wanted.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        outcome r;
        try {
            r = e.fn();
        } catch (const std::exception& ex) {
            r.pass = false;
            r.details.push_back(std::string("FAIL exception: ") + ex.what());
        }
        std::printf("criterion %2d %s: %s (%.1f s)\n", e.id, r.pass ? "PASS" : "FAIL", e.title, seconds_since(t0));
        for (const auto& d : r.details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}
