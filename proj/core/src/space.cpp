#include "stablenoise/space.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "stablenoise/errors.hpp"
#include "stablenoise/grid_ops.hpp"

namespace stablenoise {

namespace {

constexpr double pi = std::numbers::pi;

// Tensor Gauss over [lo, hi] in parameter space, `panels` per side; two
// orders give the error estimate.
quad::result tensor(const std::function<double(const double*)>& g, const std::vector<double>& lo,
                    const std::vector<double>& hi, const std::vector<int>& panels) {
    const int d = static_cast<int>(lo.size());
    quad::result res;
    for (int order : {6, 8}) {
        const auto& rule = quad::gauss_legendre(order);
        std::vector<std::vector<double>> pts(d), wts(d);
        for (int i = 0; i < d; ++i) {
            const double w = (hi[i] - lo[i]) / panels[i];
            for (int p = 0; p < panels[i]; ++p)
                for (int j = 0; j < order; ++j) {
                    pts[i].push_back(lo[i] + w * p + 0.5 * w * (rule.nodes[j] + 1.0));
                    wts[i].push_back(0.5 * w * rule.weights[j]);
                }
        }
        std::array<std::size_t, 4> idx{};
        std::array<double, 4> x{};
        double total = 0.0;
        for (;;) {
            double w = 1.0;
            for (int i = 0; i < d; ++i) {
                x[i] = pts[i][idx[i]];
                w *= wts[i][idx[i]];
            }
            total += w * g(x.data());
            ++res.evaluations;
            int i = d - 1;
            for (; i >= 0; --i) {
                if (++idx[i] < pts[i].size()) break;
                idx[i] = 0;
            }
            if (i < 0) break;
        }
        res.error = std::abs(total - res.value);
        res.value = total;
    }
    res.converged = std::isfinite(res.value);
    return res;
}

void uniform_direction(counter_stream& s, std::span<double> out) {
    double n = 0.0;
    do {
        n = 0.0;
        for (double& v : out) {
            v = s.normal();
            n += v * v;
        }
    } while (n == 0.0);
    n = std::sqrt(n);
    for (double& v : out) v /= n;
}

// Point of S^q from spherical angles t[0..q-1]; returns the Jacobian relative
// to the uniform probability measure.
double sphere_point(int q, const double* t, double* x) {
    switch (q) {
        case 1:
            x[0] = std::cos(t[0]);
            x[1] = std::sin(t[0]);
            return 1.0 / (2.0 * pi);
        case 2:
            x[0] = std::sin(t[0]) * std::cos(t[1]);
            x[1] = std::sin(t[0]) * std::sin(t[1]);
            x[2] = std::cos(t[0]);
            return std::sin(t[0]) / (4.0 * pi);
        case 3:
            x[0] = std::sin(t[0]) * std::sin(t[1]) * std::cos(t[2]);
            x[1] = std::sin(t[0]) * std::sin(t[1]) * std::sin(t[2]);
            x[2] = std::sin(t[0]) * std::cos(t[1]);
            x[3] = std::cos(t[0]);
            return std::sin(t[0]) * std::sin(t[0]) * std::sin(t[1]) / (2.0 * pi * pi);
    }
    return 0.0;
}

void sphere_domain(int q, std::vector<double>& lo, std::vector<double>& hi, std::vector<int>& panels) {
    if (q == 1) {
        lo.push_back(0.0), hi.push_back(2.0 * pi), panels.push_back(256);
    } else if (q == 2) {
        lo.insert(lo.end(), {0.0, 0.0}), hi.insert(hi.end(), {pi, 2.0 * pi}), panels.insert(panels.end(), {48, 96});
    } else {
        lo.insert(lo.end(), {0.0, 0.0, 0.0}), hi.insert(hi.end(), {pi, pi, 2.0 * pi}),
            panels.insert(panels.end(), {12, 12, 24});
    }
}

class box_space final : public space_spec {
public:
    box_space(box b, space_fn rho, double bound) : b_(std::move(b)), rho_(std::move(rho)), bound_(bound) {
        if (b_.empty()) throw std::invalid_argument("box space: empty box");
        if (rho_) {
            if (!(bound_ > 0.0)) throw std::invalid_argument("box space: density needs a positive bound");
            mass_ = stablenoise::integrate(as_kernel(rho_), b_).value;
        } else {
            mass_ = b_.volume();
        }
    }
    int coord_dim() const override { return b_.dim(); }
    std::optional<double> total_mass() const override { return mass_; }
    void sample(counter_stream& s, std::span<double> out) const override {
        for (;;) {
            for (int i = 0; i < b_.dim(); ++i) out[i] = b_.lo[i] + (b_.hi[i] - b_.lo[i]) * s.uniform();
            if (!rho_ || s.uniform() * bound_ <= rho_(out)) return;
        }
    }
    quad::result integrate(const space_fn& g) const override {
        if (!rho_) return stablenoise::integrate(as_kernel(g), b_);
        return stablenoise::integrate(as_kernel([&](std::span<const double> x) { return g(x) * rho_(x); }), b_);
    }
    quad::result integrate_pow(const space_fn& g, double alpha, bool sgn) const override {
        space_fn h = g;
        if (rho_) h = [&, alpha](std::span<const double> x) { return g(x) * std::pow(rho_(x), 1.0 / alpha); };
        const kernel k = as_kernel(h);
        return sgn ? signed_lp_pow(k, alpha, b_) : lp_pow(k, alpha, b_);
    }
    std::string describe() const override {
        std::ostringstream os;
        os << "box[";
        for (int i = 0; i < b_.dim(); ++i) os << (i ? " x " : "") << "[" << b_.lo[i] << "," << b_.hi[i] << ")";
        os << "]" << (rho_ ? " with density" : "");
        return os.str();
    }

private:
    kernel as_kernel(space_fn g) const {
        kernel_meta m;
        m.support = b_;
        m.description = "space function";
        return kernel::from_function(b_.dim(), std::move(g), m);
    }
    box b_;
    space_fn rho_;
    double bound_;
    double mass_ = 0.0;
};

class sphere_space final : public space_spec {
public:
    explicit sphere_space(int q) : q_(q) {
        if (q < 1 || q > 3) throw std::invalid_argument("sphere space: q must be 1, 2 or 3");
    }
    int coord_dim() const override { return q_ + 1; }
    std::optional<double> total_mass() const override { return 1.0; }
    void sample(counter_stream& s, std::span<double> out) const override { uniform_direction(s, out); }
    quad::result integrate(const space_fn& g) const override {
        std::vector<double> lo, hi;
        std::vector<int> panels;
        sphere_domain(q_, lo, hi, panels);
        const int n = q_ + 1;
        return tensor(
            [&](const double* t) {
                std::array<double, 4> x{};
                const double j = sphere_point(q_, t, x.data());
                return j * g(std::span<const double>(x.data(), n));
            },
            lo, hi, panels);
    }
    std::string describe() const override { return "sphere S^" + std::to_string(q_); }

private:
    int q_;
};

class half_space_space final : public space_spec {
public:
    half_space_space(int q, double R) : q_(q), R_(R) {
        if (q < 1 || q > 3) throw std::invalid_argument("half-space parameter space: q must be 1, 2 or 3");
        if (!(R > 0.0)) throw std::invalid_argument("half-space parameter space: R must be > 0");
    }
    int coord_dim() const override { return q_ + 1; }
    std::optional<double> total_mass() const override { return R_; }
    void sample(counter_stream& s, std::span<double> out) const override {
        uniform_direction(s, out.subspan(0, static_cast<std::size_t>(q_)));
        out[q_] = R_ * s.uniform();
    }
    quad::result integrate(const space_fn& g) const override {
        std::array<double, 4> x{};
        const std::span<const double> pt(x.data(), static_cast<std::size_t>(q_ + 1));
        if (q_ == 1) {
            quad::result r;
            for (double s : {1.0, -1.0}) {
                quad::result p = quad::adaptive(
                    [&](double rr) {
                        x[0] = s;
                        x[1] = rr;
                        return 0.5 * g(pt);
                    },
                    0.0, R_);
                r += p;
            }
            return r;
        }
        std::vector<double> lo, hi;
        std::vector<int> panels;
        sphere_domain(q_ - 1, lo, hi, panels);
        for (int& p : panels) p = std::max(4, p / 2);
        lo.push_back(0.0), hi.push_back(R_), panels.push_back(32);
        return tensor(
            [&](const double* t) {
                const double j = sphere_point(q_ - 1, t, x.data());
                x[q_] = t[q_ - 1];
                return j * g(pt);
            },
            lo, hi, panels);
    }
    std::string describe() const override {
        std::ostringstream os;
        os << "S^" << q_ - 1 << " x (0," << R_ << "]";
        return os.str();
    }

private:
    int q_;
    double R_;
};

class lebesgue_space final : public space_spec {
public:
    explicit lebesgue_space(int d) : d_(d) {
        if (d < 1 || d > max_kernel_dim) throw std::invalid_argument("Lebesgue space: dimension must be in [1, 8]");
    }
    int coord_dim() const override { return d_; }
    std::optional<double> total_mass() const override { return std::nullopt; }
    void sample(counter_stream&, std::span<double>) const override {
        throw std::invalid_argument("cannot sample an infinite-mass space; restrict it to a window");
    }
    quad::result integrate(const space_fn&) const override {
        throw std::invalid_argument("integration over R^d needs a kernel with support or decay metadata");
    }
    quad::result integrate_pow(const space_fn&, double, bool) const override {
        throw std::invalid_argument("integration over R^d needs a kernel with support or decay metadata");
    }
    std::string describe() const override { return "R^" + std::to_string(d_); }

private:
    int d_;
};

}  // namespace

quad::result space_spec::integrate_pow(const space_fn& g, double alpha, bool signed_power) const {
    return integrate([&](std::span<const double> x) {
        const double v = g(x);
        const double a = std::pow(std::abs(v), alpha);
        return signed_power && v < 0.0 ? -a : a;
    });
}

space_ptr make_box_space(const box& b, space_fn density, double density_bound) {
    return std::make_shared<box_space>(b, std::move(density), density_bound);
}

space_ptr make_sphere_space(int q) { return std::make_shared<sphere_space>(q); }

space_ptr make_half_space_param_space(int q, double R) { return std::make_shared<half_space_space>(q, R); }

space_ptr make_lebesgue_space(int d) { return std::make_shared<lebesgue_space>(d); }

stable_params integral_params(const kernel& f, double alpha, double nu) {
    const quad::result a = lp_pow(f, alpha);
    if (!a.converged || !std::isfinite(a.value)) throw numerical_failure("integral of |f|^alpha diverges");
    if (a.value <= 0.0) return stable_params(alpha, 0.0, alpha == 1.0 ? 0.0 : nu);
    double nf = 0.0;
    if (alpha != 1.0 && nu != 0.0) nf = std::clamp(nu * signed_lp_pow(f, alpha).value / a.value, -1.0, 1.0);
    return stable_params(alpha, std::pow(a.value, 1.0 / alpha), nf);
}

stable_params integral_params(const space_spec& E, const space_fn& f, double alpha, double nu) {
    const quad::result a = E.integrate_pow(f, alpha);
    if (!a.converged || !std::isfinite(a.value)) throw numerical_failure("integral of |f|^alpha diverges");
    if (a.value <= 0.0) return stable_params(alpha, 0.0, alpha == 1.0 ? 0.0 : nu);
    double nf = 0.0;
    if (alpha != 1.0 && nu != 0.0) nf = std::clamp(nu * E.integrate_pow(f, alpha, true).value / a.value, -1.0, 1.0);
    return stable_params(alpha, std::pow(a.value, 1.0 / alpha), nf);
}

}  // namespace stablenoise
