#include "stablenoise/grid_noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "stablenoise/errors.hpp"
#include "stablenoise/parallel.hpp"

namespace stablenoise {

namespace {

template <class F>
void for_each_index(const index_window& w, F&& fn) {
    const int d = w.dim();
    const std::size_t n = w.size();
    std::array<std::int64_t, max_kernel_dim> k{};
    for (int i = 0; i < d; ++i) k[i] = w.lo[i];
    for (std::size_t j = 0; j < n; ++j) {
        fn(j, std::span<const std::int64_t>(k.data(), d));
        for (int i = d - 1; i >= 0; --i) {
            if (++k[i] < w.hi[i]) break;
            k[i] = w.lo[i];
        }
    }
}

double draw_lump(const noise_functional& nf, const innovation_sampler& xi, std::uint64_t replica) {
    counter_stream s(xi.key(replica), 0, stream_tag::lump);
    return draw_stable(stable_params(nf.alpha, nf.lump_scale, nf.alpha == 1.0 ? 0.0 : nf.lump_nu), s);
}

box window_box(const index_window& w, double h) {
    std::vector<double> lo(w.dim()), hi(w.dim());
    for (int i = 0; i < w.dim(); ++i) {
        lo[i] = h * static_cast<double>(w.lo[i]);
        hi[i] = h * static_cast<double>(w.hi[i]);
    }
    return box(lo, hi);
}

bool inside(const box& a, const box& b) {
    for (int i = 0; i < a.dim(); ++i)
        if (a.lo[i] < b.lo[i] || a.hi[i] > b.hi[i]) return false;
    return true;
}

double signed_pow(double v, double a) {
    const double p = std::pow(std::abs(v), a);
    return v < 0.0 ? -p : p;
}

}  // namespace

double noise_functional::eval(const innovation_sampler& xi, std::uint64_t replica) const {
    const philox_key key = xi.key(replica);
    double s = 0.0;
    for_each_index(window, [&](std::size_t j, std::span<const std::int64_t> k) {
        if (weights[j] != 0.0) s += weights[j] * xi.at_packed(key, pack_index(k));
    });
    if (lump_scale > 0.0) s += draw_lump(*this, xi, replica);
    return s;
}

std::vector<std::vector<std::int64_t>> noise_functional::touched() const {
    std::vector<std::vector<std::int64_t>> out;
    for_each_index(window, [&](std::size_t j, std::span<const std::int64_t> k) {
        if (weights[j] != 0.0) out.emplace_back(k.begin(), k.end());
    });
    return out;
}

std::vector<double> eval_many(const std::vector<noise_functional>& fs, const innovation_sampler& xi,
                              std::uint64_t replica) {
    std::vector<double> out(fs.size(), 0.0);
    if (fs.empty()) return out;
    index_window hull = fs[0].window;
    for (const auto& f : fs) hull = hull.hull(f.window);
    std::vector<double> cache(hull.size(), std::numeric_limits<double>::quiet_NaN());
    const philox_key key = xi.key(replica);
    bool lump_drawn = false;
    double lump_unit = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto& f = fs[i];
        double s = 0.0;
        for_each_index(f.window, [&](std::size_t j, std::span<const std::int64_t> k) {
            if (f.weights[j] == 0.0) return;
            double& x = cache[hull.linear(k)];
            if (std::isnan(x)) x = xi.at_packed(key, pack_index(k));
            s += f.weights[j] * x;
        });
        if (f.lump_scale > 0.0) {
            if (f.lump_nu == 0.0) {
                // one shared unit draw keeps the far fields of a family coupled
                if (!lump_drawn) {
                    counter_stream st(key, 0, stream_tag::lump);
                    lump_unit = draw_stable(stable_params(f.alpha, 1.0, 0.0), st);
                    lump_drawn = true;
                }
                s += f.lump_scale * lump_unit;
            } else {
                s += draw_lump(f, xi, replica);
            }
        }
        out[i] = s;
    }
    return out;
}

grid_noise::grid_noise(grid_spec g, innovation_sampler xi) : grid_(std::move(g)), xi_(std::move(xi)) {
    if (grid_.dim < 1 || grid_.dim > max_kernel_dim) throw std::invalid_argument("grid_noise: dimension must be in [1, 8]");
    if (!(grid_.h > 0.0)) throw std::invalid_argument("grid_noise: span must be > 0");
    if (!(xi_.limit().sigma > 0.0)) throw std::invalid_argument("grid_noise: sigma must be > 0");
}

grid_noise grid_noise::with_span(double h) const {
    grid_spec g = grid_;
    g.h = h;
    return grid_noise(g, xi_);
}

bool grid_noise::can_lump() const { return grid_.dim == 1 && xi_.mode() != innovation_mode::pareto_tail; }

std::pair<index_window, double> grid_noise::window_for(const kernel& f, const prepare_options& o, bool* lump) const {
    const int d = grid_.dim;
    const double a = alpha();
    if (lump) *lump = false;
    if (grid_.window.dim() == d) {
        const box wb = window_box(grid_.window, grid_.h);
        double tail = 0.0;
        if (f.support()) {
            if (!inside(*f.support(), wb)) tail = lp_pow(f, a).value - lp_pow(f, a, wb).value;
        } else if (f.decay()) {
            double rin = std::numeric_limits<double>::infinity();
            for (int i = 0; i < d; ++i) rin = std::min({rin, -wb.lo[i], wb.hi[i]});
            tail = rin > 0.0 ? tail_bound(*f.decay(), a, d, rin) : std::numeric_limits<double>::infinity();
            if (!std::isfinite(tail)) tail = std::max(0.0, lp_pow(f, a).value - lp_pow(f, a, wb).value);
        }
        tail = std::max(tail, 0.0);
        if (lump && o.far_field && can_lump() && tail > o.eps * lp_pow(f, a, wb).value) *lump = true;
        return {grid_.window, tail};
    }
    const double rcap = 0.5 * grid_.h * std::pow(static_cast<double>(o.max_cells), 1.0 / d);
    const effective_region e = find_effective_region(f, a, o.eps, rcap);
    if (e.within_budget) return {grid_.cover(e.region), e.tail};
    if (o.far_field && can_lump() && lump) {
        double R = o.far_radius;
        if (!(R > 0.0)) R = std::min(rcap, std::max(8.0 * f.decay()->radius, 64.0 * grid_.h));
        *lump = true;
        return {grid_.cover(box::cube(d, -R, R)), tail_bound(*f.decay(), a, d, R)};
    }
    std::ostringstream os;
    os << "truncation budget exceeded: certified tail " << e.tail << " > " << o.eps << " * " << e.norm
       << " within radius " << rcap;
    throw numerical_failure(os.str());
}

void grid_noise::add_lump(noise_functional& nf, const kernel& f) const {
    const double h = grid_.h;
    const double a = alpha();
    const std::int64_t lo = nf.window.lo[0], hi = nf.window.hi[0];
    const std::int64_t near = std::min<std::int64_t>(16 * (hi - lo), 1 << 18);
    double S = 0.0, Ss = 0.0;
    for (const auto& w : {index_window({lo - near}, {lo}), index_window({hi}, {hi + near})}) {
        grid_spec g = grid_;
        g.window = w;
        const cell_array u = psi_h(f, g);
        for (double v : u.values()) {
            S += h * std::pow(std::abs(v), a);
            Ss += h * signed_pow(v, a);
        }
    }
    const auto g_abs = [&f, a](double x) { return std::pow(std::abs(f(x)), a); };
    const auto g_sgn = [&f, a](double x) { return signed_pow(f(x), a); };
    const double right = h * static_cast<double>(hi + near), left = h * static_cast<double>(lo - near);
    const double sc = std::max(1.0, std::abs(right));
    S += quad::to_infinity(g_abs, right, sc).value + quad::from_minus_infinity(g_abs, left, sc).value;
    Ss += quad::to_infinity(g_sgn, right, sc).value + quad::from_minus_infinity(g_sgn, left, sc).value;
    if (S <= 0.0) return;
    nf.lump_scale = std::pow(S, 1.0 / a);
    nf.lump_nu = std::clamp(xi_.limit().nu * Ss / S, -1.0, 1.0);
    nf.truncation = 0.0;
}

noise_functional grid_noise::prepare(const kernel& f, const prepare_options& o) const {
    if (f.dim() != grid_.dim) throw std::invalid_argument("grid noise: kernel and grid dimensions differ");
    if (o.check) {
        const integrand_report r = check_integrand(f, alpha());
        if (!r.accepted(alpha())) throw integrand_rejected(r.reason);
    }
    bool lump = false;
    auto [w, tail] = window_for(f, o, &lump);
    grid_spec g = grid_;
    g.window = w;
    const cell_array u = psi_h(f, g);
    noise_functional nf;
    nf.window = w;
    nf.alpha = alpha();
    nf.weights.assign(u.values().begin(), u.values().end());
    const double gd = gamma_dirac();
    for (double& v : nf.weights) v *= gd;
    nf.truncation = tail;
    if (lump) add_lump(nf, f);
    return nf;
}

noise_functional grid_noise::prepare_dirac(const kernel& f, const prepare_options& o) const {
    if (f.dim() != grid_.dim) throw std::invalid_argument("dirac noise: kernel and grid dimensions differ");
    if (!f.continuous()) throw integrand_rejected("the Dirac-comb noise needs a continuous kernel");
    if (o.check) {
        const integrand_report r = check_integrand(f, alpha());
        if (!r.accepted(alpha())) throw integrand_rejected(r.reason);
    }
    bool lump = false;
    auto [w, tail] = window_for(f, o, &lump);
    noise_functional nf;
    nf.window = w;
    nf.alpha = alpha();
    nf.weights.resize(w.size());
    const double gd = gamma_dirac();
    const int d = grid_.dim;
    std::vector<double> x(d);
    for_each_index(w, [&](std::size_t j, std::span<const std::int64_t> k) {
        for (int i = 0; i < d; ++i) x[i] = grid_.h * static_cast<double>(k[i]);
        nf.weights[j] = gd * f(x);
    });
    nf.truncation = tail;
    if (lump) add_lump(nf, f);
    return nf;
}

noise_functional grid_noise::prepare_filtered(const kernel& f, const filter_spec& c, const prepare_options& o) const {
    const double a = alpha();
    const int d = grid_.dim;
    if (!(a > 1.0)) throw integrand_rejected("filtered noise needs 1 < alpha <= 2");
    if (c.dim() != d) throw std::invalid_argument("filter and grid dimensions differ");
    if (f.dim() != d) throw std::invalid_argument("filtered noise: kernel and grid dimensions differ");
    if (c.regime == filter_regime::regularly_varying) {
        if (d != 1) throw std::invalid_argument("regularly varying filters are supported in d = 1");
        c.profile.validate(a);
    }
    if (o.check) {
        const integrand_report r = check_integrand(f, a);
        if (!r.accepted(a)) throw integrand_rejected(r.reason);
        if (c.regime == filter_regime::regularly_varying) {
            const quad::result l1 = lp_pow(f, 1.0);
            if (!l1.converged || !std::isfinite(l1.value)) throw integrand_rejected("kernel is not integrable");
        }
    }
    prepare_options inner = o;
    inner.far_field = false;
    auto [w, tail] = window_for(f, inner, nullptr);
    grid_spec g = grid_;
    g.window = w;
    const cell_array u = psi_h(f, g);
    const double scale = gamma_dirac() * filter_gain(c, grid_.h);

    noise_functional nf;
    nf.alpha = a;
    nf.truncation = tail;
    if (!(c.law && d == 1)) {
        const cell_array conv = filter_cells(u, c);
        nf.window = conv.window();
        nf.weights.assign(conv.values().begin(), conv.values().end());
        for (double& v : nf.weights) v *= scale;
        return nf;
    }

    // d = 1 with an analytic law: coefficients beyond the filter window are used
    const std::int64_t ulo = w.lo[0], uhi = w.hi[0];
    const std::int64_t llo = ulo - (c.window.hi[0] - 1), lhi = uhi - c.window.lo[0];
    std::vector<std::int64_t> ks;
    std::vector<double> us;
    for (std::int64_t k = ulo; k < uhi; ++k) {
        const double v = u.values()[static_cast<std::size_t>(k - ulo)];
        if (v != 0.0) {
            ks.push_back(k);
            us.push_back(v);
        }
    }
    const auto g_at = [&](std::int64_t l) {
        double s = 0.0;
        for (std::size_t i = 0; i < ks.size(); ++i) s += us[i] * c.coeff1(ks[i] - l);
        return s;
    };
    nf.window = index_window({llo}, {lhi});
    nf.weights.resize(static_cast<std::size_t>(lhi - llo));
    for (std::int64_t l = llo; l < lhi; ++l) nf.weights[static_cast<std::size_t>(l - llo)] = scale * g_at(l);
    if (!(o.far_field && can_lump()) || ks.empty()) return nf;

    // far field: direct sums over N cells per side, then the power-law tail
    const std::int64_t N = std::clamp<std::int64_t>((1 << 24) / static_cast<std::int64_t>(ks.size()), 4096, 1 << 16);
    double S = 0.0, Ss = 0.0;
    for (std::int64_t j = 1; j <= N; ++j)
        for (std::int64_t l : {llo - j, lhi - 1 + j}) {
            const double v = g_at(l);
            S += std::pow(std::abs(v), a);
            Ss += signed_pow(v, a);
        }
    double G = 0.0, m1 = 0.0, m0 = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        G += us[i];
        m1 += std::abs(us[i]) * static_cast<double>(ks[i]);
        m0 += std::abs(us[i]);
    }
    const double kbar = m1 / m0;
    const double ab = a * c.profile.beta;
    // l -> +inf sees c(k - l) ~ p(-1) |l - kbar|^-beta, l -> -inf sees p(+1)
    const double right_start = static_cast<double>(lhi - 1 + N) + 0.5 - kbar;
    const double left_start = kbar - (static_cast<double>(llo - N) - 0.5);
    const double tr = std::pow(std::abs(G * c.profile.minus), a) * std::pow(right_start, 1.0 - ab) / (ab - 1.0);
    const double tl = std::pow(std::abs(G * c.profile.plus), a) * std::pow(left_start, 1.0 - ab) / (ab - 1.0);
    S += tr + tl;
    Ss += (G * c.profile.minus < 0.0 ? -tr : tr) + (G * c.profile.plus < 0.0 ? -tl : tl);
    const double unit = scale * sigma();
    nf.lump_scale = unit * std::pow(S, 1.0 / a);
    nf.lump_nu = std::clamp(xi_.limit().nu * Ss / S, -1.0, 1.0);
    return nf;
}

std::pair<double, double> scaling_transport(const grid_noise& noise, const kernel& f, double c, std::uint64_t replica) {
    if (!(c > 0.0)) throw std::invalid_argument("scaling_transport: c must be > 0");
    const double h = noise.grid().h;
    const int d = noise.grid().dim;
    prepare_options o;
    o.far_field = false;
    const grid_noise wide = noise.with_span(c * h);
    const index_window w = wide.window_for(f, o, nullptr).first;
    grid_spec g1 = noise.grid();
    g1.window = w;
    grid_spec g2 = g1;
    g2.h = c * h;
    const grid_noise n1(g1, noise.innovations());
    const grid_noise n2(g2, noise.innovations());
    const double lhs = n1.prepare(f.dilate(c), o).eval(noise.innovations(), replica);
    const double rhs = std::pow(c, -d / noise.alpha()) * n2.prepare(f, o).eval(noise.innovations(), replica);
    return {lhs, rhs};
}

std::vector<double> simulate_process(const grid_noise& noise, const std::vector<kernel>& family, std::uint64_t replica,
                                     const prepare_options& o) {
    std::vector<noise_functional> fs;
    fs.reserve(family.size());
    for (const auto& f : family) fs.push_back(noise.prepare(f, o));
    return eval_many(fs, noise.innovations(), replica);
}

double error_bound(const kernel& f, const kernel& f_M, const grid_spec& g, double p, const stable_params& params) {
    const double a = params.alpha;
    if (!(p > 0.0)) throw std::invalid_argument("error_bound: p must be > 0");
    if (a < 2.0 && p >= a) throw std::invalid_argument("error_bound: p must be < alpha");
    grid_spec gg = g;
    if (gg.window.dim() != gg.dim) gg.window = gg.cover(find_effective_region(f_M, a).region);
    const kernel diff = tilde_psi_h(f_M, gg) - f;
    const double n = lp_pow(diff, a).value;
    if (n <= 0.0) return 0.0;
    const double nu = a == 1.0 ? 0.0 : std::clamp(params.nu * signed_lp_pow(diff, a).value / n, -1.0, 1.0);
    return stable_abs_moment(a, p, nu) * std::pow(n, p / a);
}

coupled_error_report coupled_error_study(const kernel& f, const kernel& f_M, double h, double p,
                                         const stable_params& params, std::size_t n, std::uint64_t seed, int refine,
                                         int threads) {
    if (f.dim() != 1 || f_M.dim() != 1) throw std::invalid_argument("coupled error study is implemented for d = 1");
    if (refine < 1) throw std::invalid_argument("refine must be >= 1");
    const double a = params.alpha;
    const innovation_sampler xi = innovation_sampler::exact(params, seed);

    grid_spec coarse(1, h);
    coarse.window = coarse.cover(find_effective_region(f_M, a).region);
    const cell_array u = psi_h(f_M, coarse);

    const double hf = h / refine;
    grid_spec fine(1, hf);
    index_window fw = fine.cover(find_effective_region(f, a, 1e-7).region);
    fw = fw.hull(index_window({coarse.window.lo[0] * refine}, {coarse.window.hi[0] * refine}));
    fine.window = fw;
    const cell_array v = psi_h(f, fine);

    // coarse cell k is the union of fine cells refine*k .. refine*k + refine - 1, and
    // xi_k = refine^(-1/alpha) sum eta_j; both terms become sums over eta_j
    const double unit = std::pow(hf, 1.0 / a) / params.sigma;
    std::vector<double> w(fw.size());
    std::vector<std::uint64_t> packed(fw.size());
    for (std::int64_t j = fw.lo[0]; j < fw.hi[0]; ++j) {
        const std::int64_t k = j >= 0 ? j / refine : -((-j + refine - 1) / refine);
        const std::size_t idx = static_cast<std::size_t>(j - fw.lo[0]);
        const double uk = coarse.window.contains(std::span<const std::int64_t>(&k, 1)) ? u.at(std::span<const std::int64_t>(&k, 1)) : 0.0;
        w[idx] = unit * (uk - v[idx]);
        packed[idx] = pack_index(std::span<const std::int64_t>(&j, 1));
    }
    const std::vector<double> diffs = replicate(n, threads, [&](std::uint64_t r) {
        const philox_key key = xi.key(r);
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] != 0.0) s += w[i] * xi.at_packed(key, packed[i], stream_tag::fine);
        return s;
    });
    coupled_error_report rep;
    rep.n = n;
    double m = 0.0, m2 = 0.0;
    for (double x : diffs) {
        const double y = std::pow(std::abs(x), p);
        m += y;
        m2 += y * y;
    }
    m /= static_cast<double>(n);
    m2 /= static_cast<double>(n);
    rep.empirical = m;
    rep.std_error = std::sqrt(std::max(0.0, m2 - m * m) / static_cast<double>(n));
    rep.bound = error_bound(f, f_M, coarse, p, params);
    rep.norm = std::pow(lp_pow(tilde_psi_h(f_M, coarse) - f, a).value, 1.0 / a);
    rep.ratio = rep.bound > 0.0 ? rep.empirical / rep.bound : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

}  // namespace stablenoise
