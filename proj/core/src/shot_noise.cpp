#include "stablenoise/shot_noise.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include "stablenoise/errors.hpp"

namespace stablenoise {

namespace {

double shot_gamma(const innovation_sampler& G, double lambda) {
    const stable_params& p = G.limit();
    return std::pow(lambda, -1.0 / p.alpha) / p.sigma;
}

std::complex<double> mark_char_fn(const innovation_sampler& G, double u, const mark_char_fn_options& o,
                                  const std::vector<double>& cache) {
    if (!o.cached_draws) return G.char_fn(u);
    std::complex<double> s = 0.0;
    for (double x : cache) s += std::exp(std::complex<double>(0.0, u * x));
    return s / static_cast<double>(cache.size());
}

std::vector<double> mark_cache(const innovation_sampler& G, const mark_char_fn_options& o) {
    std::vector<double> c;
    if (!o.cached_draws) return c;
    c.reserve(o.draws);
    const philox_key key = derive_key(o.seed, 0);
    for (std::size_t i = 0; i < o.draws; ++i) c.push_back(G.at_packed(key, i, stream_tag::oracle));
    return c;
}

// int (Psi(theta c f(e)) - 1) dm as a complex number
std::complex<double> exponent(const space_spec& E, const innovation_sampler& G, const space_fn& f, double scale,
                              const mark_char_fn_options& o) {
    const std::vector<double> cache = mark_cache(G, o);
    const auto part = [&](bool imag) {
        return E.integrate([&](std::span<const double> x) {
            const double v = f(x);
            if (v == 0.0) return 0.0;
            const std::complex<double> z = mark_char_fn(G, scale * v, o, cache) - 1.0;
            return imag ? z.imag() : z.real();
        });
    };
    const quad::result re = part(false), im = part(true);
    return {re.value, im.value};
}

}  // namespace

std::string point_cloud::to_csv() const {
    std::ostringstream os;
    os << std::setprecision(17);
    for (int i = 0; i < coord_dim; ++i) os << "e_" << i + 1 << ",";
    os << "xi\n";
    for (std::size_t j = 0; j < size(); ++j) {
        for (double v : point(j)) os << v << ",";
        os << marks[j] << "\n";
    }
    return os.str();
}

point_cloud sample_poisson_cloud(const space_spec& E, double lambda, const innovation_sampler& G, std::uint64_t replica) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("poisson cloud: lambda must be >= 0");
    const auto mass = E.total_mass();
    if (!mass) throw std::invalid_argument("poisson cloud: infinite-mass space needs a restriction window");
    point_cloud c;
    c.coord_dim = E.coord_dim();
    c.lambda = lambda;
    if (lambda == 0.0) return c;
    c.gamma = shot_gamma(G, lambda);
    const philox_key key = G.key(replica);
    counter_stream cs(key, 0, stream_tag::count);
    std::poisson_distribution<long long> pois(lambda * *mass);
    const auto n = static_cast<std::size_t>(pois(cs));
    c.points.resize(n * static_cast<std::size_t>(c.coord_dim));
    c.marks.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        counter_stream ls(key, i, stream_tag::location);
        E.sample(ls, std::span<double>(c.points.data() + i * c.coord_dim, static_cast<std::size_t>(c.coord_dim)));
        c.marks[i] = G.at_packed(key, i, stream_tag::mark);
    }
    return c;
}

point_cloud merge(const point_cloud& a, const point_cloud& b, double alpha, double sigma) {
    if (a.coord_dim != b.coord_dim) throw std::invalid_argument("merge: clouds live on different spaces");
    point_cloud c;
    c.coord_dim = a.coord_dim;
    c.lambda = a.lambda + b.lambda;
    c.gamma = c.lambda > 0.0 ? std::pow(c.lambda, -1.0 / alpha) / sigma : 0.0;
    c.points = a.points;
    c.points.insert(c.points.end(), b.points.begin(), b.points.end());
    c.marks = a.marks;
    c.marks.insert(c.marks.end(), b.marks.begin(), b.marks.end());
    return c;
}

double shot_noise_eval(const point_cloud& cloud, const space_fn& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) s += cloud.marks[i] * f(cloud.point(i));
    return cloud.gamma * s;
}

std::vector<double> shot_noise_eval(const point_cloud& cloud, const std::vector<space_fn>& fs) {
    std::vector<double> out(fs.size(), 0.0);
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (std::size_t j = 0; j < fs.size(); ++j) out[j] += cloud.marks[i] * fs[j](cloud.point(i));
    for (double& v : out) v *= cloud.gamma;
    return out;
}

double binomial_noise_eval(const space_spec& E, std::size_t n, const innovation_sampler& G, const space_fn& f,
                           std::uint64_t replica) {
    const auto mass = E.total_mass();
    if (!mass || std::abs(*mass - 1.0) > 1e-9) throw std::invalid_argument("binomial noise needs a normalized space");
    if (n == 0) return 0.0;
    const philox_key key = G.key(replica);
    std::vector<double> x(static_cast<std::size_t>(E.coord_dim()));
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        counter_stream ls(key, i, stream_tag::location);
        E.sample(ls, x);
        s += G.at_packed(key, i, stream_tag::mark) * f(x);
    }
    return shot_gamma(G, static_cast<double>(n)) * s;
}

bool check_shot_integrand(const space_spec& E, const space_fn& f, double alpha, std::string* reason) {
    quad::result r;
    try {
        r = E.integrate_pow(f, alpha);
    } catch (const std::exception& e) {
        if (reason) *reason = e.what();
        return false;
    }
    if (!r.converged || !std::isfinite(r.value)) {
        if (reason) *reason = "integral of |f|^alpha dm diverges";
        return false;
    }
    return true;
}

std::complex<double> shot_noise_char_fn(const space_spec& E, double lambda, const innovation_sampler& G, const space_fn& f,
                                        double theta, const mark_char_fn_options& o) {
    if (lambda == 0.0 || theta == 0.0) return 1.0;
    const std::complex<double> e = exponent(E, G, f, theta * shot_gamma(G, lambda), o);
    return std::exp(lambda * e);
}

std::complex<double> binomial_char_fn(const space_spec& E, std::size_t n, const innovation_sampler& G, const space_fn& f,
                                      double theta, const mark_char_fn_options& o) {
    if (n == 0 || theta == 0.0) return 1.0;
    const std::complex<double> e = exponent(E, G, f, theta * shot_gamma(G, static_cast<double>(n)), o);
    return std::pow(1.0 + e, static_cast<double>(n));
}

}  // namespace stablenoise
