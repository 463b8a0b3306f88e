#include "stablenoise/filter.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stablenoise {

double homogeneous_profile::operator()(double x) const {
    if (x > 0.0) return plus * std::pow(x, -beta);
    if (x < 0.0) return minus * std::pow(-x, -beta);
    return std::numeric_limits<double>::infinity();
}

double homogeneous_profile::sphere_bound() const { return std::max(std::abs(plus), std::abs(minus)); }

void homogeneous_profile::validate(double alpha) const {
    if (!(beta > 1.0 / alpha && beta < 1.0))
        throw std::invalid_argument("profile exponent must satisfy 1/alpha < beta < 1 in d = 1");
    if (!std::isfinite(plus) || !std::isfinite(minus)) throw std::invalid_argument("profile must be bounded on the sphere");
}

std::string to_string(filter_regime r) {
    return r == filter_regime::summable ? "summable" : "regularly-varying";
}

double filter_spec::coeff(std::span<const std::int64_t> k) const {
    if (window.contains(k)) return coeffs[window.linear(k)];
    if (law && k.size() == 1) return law(static_cast<double>(k[0]));
    return 0.0;
}

double filter_spec::coeff1(std::int64_t k) const { return coeff(std::span<const std::int64_t>(&k, 1)); }

double filter_spec::sum() const {
    double s = 0.0;
    for (double v : coeffs) s += v;
    return s;
}

double filter_spec::omitted_l1() const {
    if (!law || dim() != 1) return 0.0;
    double s = 0.0;
    for (std::int64_t k = 1; k <= 100000; ++k) {
        const double a = window.hi[0] - 1 + k;
        const double b = window.lo[0] - k;
        s += std::abs(law(a)) + std::abs(law(b));
    }
    return s;
}

filter_spec filter_spec::identity(int dim) {
    filter_spec f;
    f.regime = filter_regime::summable;
    f.window = index_window::cube(dim, 0, 1);
    f.coeffs = {1.0};
    f.description = "identity";
    return f;
}

filter_spec filter_spec::geometric(double r, std::int64_t K) {
    if (!(std::abs(r) < 1.0)) throw std::invalid_argument("geometric filter needs |r| < 1");
    if (K < 0) throw std::invalid_argument("geometric filter needs K >= 0");
    filter_spec f;
    f.regime = filter_regime::summable;
    f.window = index_window({-K}, {K + 1});
    for (std::int64_t k = -K; k <= K; ++k) f.coeffs.push_back(std::pow(r, static_cast<double>(std::llabs(k))));
    f.description = "geometric(" + std::to_string(r) + ")";
    return f;
}

filter_spec filter_spec::power(const homogeneous_profile& p, std::int64_t K, double c0) {
    if (K < 1) throw std::invalid_argument("power filter needs K >= 1");
    filter_spec f;
    f.regime = filter_regime::regularly_varying;
    f.profile = p;
    f.window = index_window({-K}, {K + 1});
    for (std::int64_t k = -K; k <= K; ++k) f.coeffs.push_back(k == 0 ? c0 : p(static_cast<double>(k)));
    f.law = [p, c0](double k) { return k == 0.0 ? c0 : p(k); };
    f.description = "power(beta=" + std::to_string(p.beta) + ")";
    return f;
}

filter_spec filter_spec::explicit_coefficients(index_window w, std::vector<double> c, filter_regime r) {
    if (w.size() != c.size()) throw std::invalid_argument("filter: coefficient count does not match window");
    filter_spec f;
    f.regime = r;
    f.window = std::move(w);
    f.coeffs = std::move(c);
    f.description = "explicit";
    return f;
}

}  // namespace stablenoise
