#include "stablenoise/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

namespace stablenoise {

namespace {

// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^(j-1) exp(-2 j^2 lambda^2)
double q_ks(double lambda) {
    if (lambda < 0.2) return 1.0;
    double sum = 0.0, sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = sign * 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::abs(term) <= 1e-12 * std::abs(sum) || std::abs(term) <= 1e-300) break;
        sign = -sign;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double ks_pvalue(double d, double ne) {
    const double s = std::sqrt(ne);
    return q_ks((s + 0.12 + 0.11 / s) * d);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::complex<double> empirical_char_fn(std::span<const double> x, double theta) {
    if (x.empty()) throw std::invalid_argument("empirical_char_fn: empty sample");
    double c = 0.0, s = 0.0;
    for (double v : x) {
        c += std::cos(theta * v);
        s += std::sin(theta * v);
    }
    const double n = static_cast<double>(x.size());
    return {c / n, s / n};
}

double char_distance(std::span<const double> x, const std::function<std::complex<double>(double)>& target,
                     std::span<const double> thetas) {
    if (thetas.empty()) throw std::invalid_argument("char_distance: empty theta grid");
    double d = 0.0;
    for (double t : thetas) d = std::max(d, std::abs(empirical_char_fn(x, t) - target(t)));
    return d;
}

std::vector<double> theta_grid(double T, int count) {
    if (!(T > 0.0) || count < 1) throw std::invalid_argument("theta_grid: need T > 0 and count >= 1");
    std::vector<double> out;
    out.reserve(2 * static_cast<std::size_t>(count));
    for (int i = 1; i <= count; ++i) {
        const double t = T * i / count;
        out.push_back(-t);
        out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

ks_result ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 100 || b.size() < 100) throw std::invalid_argument("ks_two_sample: need at least 100 values per sample");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(i / n - j / m));
    }
    ks_result r;
    r.statistic = d;
    r.n_eff = n * m / (n + m);
    r.pvalue = ks_pvalue(d, r.n_eff);
    return r;
}

ks_result ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf) {
    if (x.size() < 100) throw std::invalid_argument("ks_one_sample: need at least 100 values");
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double F = cdf(s[i]);
        d = std::max({d, (i + 1) / n - F, F - i / n});
    }
    ks_result r;
    r.statistic = d;
    r.n_eff = n;
    r.pvalue = ks_pvalue(d, n);
    return r;
}

double hill_estimator(std::span<const double> x, std::size_t k) {
    if (k == 0 || 2 * k >= x.size()) throw std::invalid_argument("hill_estimator: need 0 < k < n/2");
    std::vector<double> a(x.size());
    std::transform(x.begin(), x.end(), a.begin(), [](double v) { return std::abs(v); });
    std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k), a.end(), std::greater<>());
    const double ref = a[k];
    if (!(ref > 0.0)) throw std::invalid_argument("hill_estimator: threshold order statistic is zero");
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += std::log(a[i] / ref);
    return static_cast<double>(k) / s;
}

chi2_result chi_square_test(std::span<const double> observed, std::span<const double> expected, int fitted) {
    if (observed.size() != expected.size() || observed.size() < 2)
        throw std::invalid_argument("chi_square_test: need matching bins, at least two");
    chi2_result r;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0)) throw std::invalid_argument("chi_square_test: expected counts must be positive");
        const double d = observed[i] - expected[i];
        r.statistic += d * d / expected[i];
    }
    r.dof = static_cast<int>(observed.size()) - 1 - fitted;
    if (r.dof < 1) throw std::invalid_argument("chi_square_test: no degrees of freedom left");
    r.pvalue = boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic);
    return r;
}

sample_stats describe(std::span<const double> x) {
    sample_stats s;
    s.n = x.size();
    if (x.empty()) return s;
    // two-pass for stability
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double q = 0.0;
    for (double v : x) q += (v - m) * (v - m);
    s.mean = m;
    s.variance = x.size() > 1 ? q / static_cast<double>(x.size() - 1) : 0.0;
    s.std_error = std::sqrt(s.variance / static_cast<double>(x.size()));
    return s;
}

double variance_std_error(std::span<const double> x) {
    const sample_stats s = describe(x);
    if (s.n < 4) return 0.0;
    double m4 = 0.0;
    for (double v : x) m4 += std::pow(v - s.mean, 4);
    m4 /= static_cast<double>(s.n);
    const double n = static_cast<double>(s.n);
    return std::sqrt(std::max(0.0, (m4 - (n - 3.0) / (n - 1.0) * s.variance * s.variance) / n));
}

double median_abs(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("median_abs: empty sample");
    std::vector<double> a(x.size());
    std::transform(x.begin(), x.end(), a.begin(), [](double v) { return std::abs(v); });
    const std::size_t mid = a.size() / 2;
    std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid), a.end());
    double med = a[mid];
    if (a.size() % 2 == 0) med = 0.5 * (med + *std::max_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid)));
    return med;
}

std::vector<double> replica_set::column(std::size_t j) const {
    if (j >= columns.size()) throw std::out_of_range("replica_set::column");
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = values[r * columns.size() + j];
    return out;
}

std::string replica_set::to_csv() const {
    std::string s = "replica,point,value\n";
    const std::size_t c = columns.size();
    for (std::size_t r = 0; r < rows(); ++r)
        for (std::size_t j = 0; j < c; ++j) s += std::to_string(r) + "," + columns[j] + "," + fmt17(values[r * c + j]) + "\n";
    return s;
}

std::string convergence_report::to_json() const {
    nlohmann::json j;
    j["parameter"] = parameter;
    j["schedule"] = schedule;
    j["ks"] = ks;
    j["pvalues"] = pvalues;
    j["char_distance"] = char_distance;
    j["level"] = level;
    j["decreasing"] = decreasing;
    j["final_accepted"] = final_accepted;
    j["pass"] = pass;
    return j.dump(2);
}

convergence_report convergence_study(const std::vector<double>& schedule,
                                     const std::function<std::vector<double>(double)>& sample,
                                     std::span<const double> reference,
                                     const std::function<std::complex<double>(double)>& target,
                                     const convergence_options& o) {
    if (schedule.size() < 2) throw std::invalid_argument("convergence_study: schedule needs at least two values");
    convergence_report r;
    r.parameter = o.parameter;
    r.schedule = schedule;
    r.level = o.level;
    for (double s : schedule) {
        const std::vector<double> x = sample(s);
        const ks_result k = ks_two_sample(x, reference);
        r.ks.push_back(k.statistic);
        r.pvalues.push_back(k.pvalue);
        if (target) r.char_distance.push_back(char_distance(x, target, o.thetas));
    }
    r.decreasing = true;
    for (std::size_t i = 1; i < r.ks.size(); ++i)
        if (!(r.ks[i] < r.ks[i - 1])) r.decreasing = false;
    r.final_accepted = r.pvalues.back() >= o.level;
    r.pass = r.decreasing && (!o.require_final_acceptance || r.final_accepted);
    return r;
}

}  // namespace stablenoise
