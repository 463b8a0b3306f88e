#include "stablenoise/levy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stablenoise/errors.hpp"

namespace stablenoise {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void require_symmetric(const innovation_sampler& G) {
    if (!G.symmetric()) throw integrand_rejected("Levy motion needs a symmetric innovation law");
}

}  // namespace

bool hemisphere_contains(std::span<const double> m, std::span<const double> x) { return dot(x, m) >= 0.0; }

int symdiff_indicator(std::span<const double> O, std::span<const double> m, std::span<const double> s) {
    return hemisphere_contains(O, s) != hemisphere_contains(m, s) ? 1 : 0;
}

double geodesic_distance(std::span<const double> a, std::span<const double> b) {
    return std::acos(std::clamp(dot(a, b), -1.0, 1.0));
}

sphere_point north_pole(int q) {
    if (q < 1) throw std::invalid_argument("sphere dimension must be >= 1");
    sphere_point o(static_cast<std::size_t>(q) + 1, 0.0);
    o.back() = 1.0;
    return o;
}

void check_sphere_point(std::span<const double> x) {
    if (std::abs(std::sqrt(dot(x, x)) - 1.0) > 1e-12) throw std::invalid_argument("point is not on the unit sphere");
}

point_cloud sphere_levy_cloud(int q, double lambda, const innovation_sampler& G, std::uint64_t replica) {
    require_symmetric(G);
    return sample_poisson_cloud(*make_sphere_space(q), lambda, G, replica);
}

std::vector<double> sphere_levy(const std::vector<sphere_point>& points, const sphere_point& O, double lambda,
                                const innovation_sampler& G, std::uint64_t replica) {
    check_sphere_point(O);
    for (const auto& m : points) {
        check_sphere_point(m);
        if (m.size() != O.size()) throw std::invalid_argument("sphere points must share the dimension of O");
    }
    const int q = static_cast<int>(O.size()) - 1;
    const point_cloud cloud = sphere_levy_cloud(q, lambda, G, replica);
    const double c = std::sqrt(std::numbers::pi) * cloud.gamma;
    std::vector<double> out(points.size(), 0.0);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto s = cloud.point(i);
        const bool in_o = hemisphere_contains(O, s);
        for (std::size_t j = 0; j < points.size(); ++j)
            if (hemisphere_contains(points[j], s) != in_o) out[j] += cloud.marks[i];
    }
    for (double& v : out) v *= c;
    return out;
}

int chentsov_indicator(std::span<const double> m, const half_space_param& h) {
    return 0.0 < h.r && h.r < dot(h.s, m) ? 1 : 0;
}

std::vector<double> chentsov_levy(const std::vector<std::vector<double>>& points, double lambda,
                                  const innovation_sampler& G, std::uint64_t replica) {
    require_symmetric(G);
    if (!(lambda > 0.0)) throw std::invalid_argument("chentsov_levy: lambda must be > 0");
    if (points.empty()) return {};
    const std::size_t q = points.front().size();
    if (q < 1) throw std::invalid_argument("points need at least one coordinate");
    double R = 0.0;
    for (const auto& m : points) {
        if (m.size() != q) throw std::invalid_argument("points must share one dimension");
        double n2 = 0.0;
        for (double v : m) {
            if (!std::isfinite(v)) throw std::invalid_argument("domain must be bounded");
            n2 += v * v;
        }
        R = std::max(R, std::sqrt(n2));
    }
    std::vector<double> out(points.size(), 0.0);
    if (R == 0.0) return out;
    // Arrivals in r at rate lambda; the i-th point does not depend on R, so
    // every requested point sees the same cloud.
    const philox_key key = G.key(replica);
    half_space_param h;
    h.s.resize(q);
    double r = 0.0;
    for (std::uint64_t i = 0;; ++i) {
        counter_stream as(key, i, stream_tag::arrival);
        r += as.exponential() / lambda;
        if (r > R) break;
        counter_stream ds(key, i, stream_tag::direction);
        double n2 = 0.0;
        do {
            n2 = 0.0;
            for (double& v : h.s) {
                v = ds.normal();
                n2 += v * v;
            }
        } while (n2 == 0.0);
        const double n = std::sqrt(n2);
        for (double& v : h.s) v /= n;
        h.r = r;
        const double xi = G.at_packed(key, i, stream_tag::mark);
        for (std::size_t j = 0; j < points.size(); ++j)
            if (chentsov_indicator(points[j], h)) out[j] += xi;
    }
    const double gamma = std::pow(lambda, -1.0 / G.limit().alpha) / G.limit().sigma;
    for (double& v : out) v *= gamma;
    return out;
}

double chentsov_mass(int q, double norm_m) {
    // E[<s, e>_+] for s uniform on S^(q-1): Gamma(q/2) / (2 sqrt(pi) Gamma((q+1)/2))
    if (q < 1) throw std::invalid_argument("q must be >= 1");
    const double c = std::exp(std::lgamma(0.5 * q) - std::lgamma(0.5 * (q + 1))) / (2.0 * std::sqrt(std::numbers::pi));
    return norm_m * c;
}

}  // namespace stablenoise
