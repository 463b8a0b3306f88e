#include "stablenoise/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace stablenoise {

box::box(std::vector<double> l, std::vector<double> h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo.size() != hi.size()) throw std::invalid_argument("box: bound dimensions differ");
}

box box::cube(int dim, double a, double b) {
    return box(std::vector<double>(dim, a), std::vector<double>(dim, b));
}

bool box::empty() const {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(hi[i] > lo[i])) return true;
    return false;
}

double box::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= std::max(0.0, hi[i] - lo[i]);
    return v;
}

bool box::contains(std::span<const double> x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(x[i] >= lo[i] && x[i] < hi[i])) return false;
    return true;
}

box box::intersect(const box& o) const {
    box r = *this;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        r.lo[i] = std::max(lo[i], o.lo[i]);
        r.hi[i] = std::min(hi[i], o.hi[i]);
    }
    return r;
}

box box::hull(const box& o) const {
    box r = *this;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        r.lo[i] = std::min(lo[i], o.lo[i]);
        r.hi[i] = std::max(hi[i], o.hi[i]);
    }
    return r;
}

box box::scaled(double c) const {
    box r = *this;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        r.lo[i] = lo[i] / c;
        r.hi[i] = hi[i] / c;
    }
    return r;
}

box box::shifted(std::span<const double> t) const {
    box r = *this;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        r.lo[i] += t[i];
        r.hi[i] += t[i];
    }
    return r;
}

index_window::index_window(std::vector<std::int64_t> l, std::vector<std::int64_t> h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo.size() != hi.size()) throw std::invalid_argument("index_window: bound dimensions differ");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (hi[i] < lo[i]) hi[i] = lo[i];
}

index_window index_window::cube(int dim, std::int64_t a, std::int64_t b) {
    return index_window(std::vector<std::int64_t>(dim, a), std::vector<std::int64_t>(dim, b));
}

std::size_t index_window::size() const {
    if (lo.empty()) return 0;
    std::size_t n = 1;
    for (int i = 0; i < dim(); ++i) n *= extent(i);
    return n;
}

bool index_window::contains(std::span<const std::int64_t> k) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (k[i] < lo[i] || k[i] >= hi[i]) return false;
    return true;
}

void index_window::index_of(std::size_t linear, std::span<std::int64_t> k) const {
    for (int i = dim() - 1; i >= 0; --i) {
        const std::size_t e = extent(i);
        k[i] = lo[i] + static_cast<std::int64_t>(linear % e);
        linear /= e;
    }
}

std::size_t index_window::linear(std::span<const std::int64_t> k) const {
    std::size_t idx = 0;
    for (int i = 0; i < dim(); ++i) idx = idx * extent(i) + static_cast<std::size_t>(k[i] - lo[i]);
    return idx;
}

index_window index_window::hull(const index_window& o) const {
    index_window r = *this;
    for (int i = 0; i < dim(); ++i) {
        r.lo[i] = std::min(lo[i], o.lo[i]);
        r.hi[i] = std::max(hi[i], o.hi[i]);
    }
    return r;
}

index_window index_window::grown(std::int64_t by) const {
    index_window r = *this;
    for (int i = 0; i < dim(); ++i) {
        r.lo[i] -= by;
        r.hi[i] += by;
    }
    return r;
}

cell_array::cell_array(double h, index_window w) : h_(h), window_(std::move(w)), values_(window_.size(), 0.0) {
    if (!(h > 0.0)) throw std::invalid_argument("cell_array: span must be > 0");
}

cell_array::cell_array(double h, index_window w, std::vector<double> values)
    : h_(h), window_(std::move(w)), values_(std::move(values)) {
    if (!(h > 0.0)) throw std::invalid_argument("cell_array: span must be > 0");
    if (values_.size() != window_.size()) throw std::invalid_argument("cell_array: value count does not match window");
}

double cell_array::at(std::span<const std::int64_t> k) const {
    if (!window_.contains(k)) return 0.0;
    return values_[window_.linear(k)];
}

double cell_array::lp_pow(double alpha) const {
    double s = 0.0;
    for (double v : values_) s += std::pow(std::abs(v), alpha);
    return s;
}

std::string cell_array::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    for (int i = 0; i < dim(); ++i) os << "k_" << (i + 1) << ',';
    os << "value\n";
    std::vector<std::int64_t> k(dim());
    for (std::size_t j = 0; j < values_.size(); ++j) {
        window_.index_of(j, k);
        for (auto v : k) os << v << ',';
        os << values_[j] << '\n';
    }
    return os.str();
}

double decay_certificate::bound(double r) const {
    double b = C * std::pow(r, -eta);
    if (rate > 0.0) b *= std::exp(-rate * std::pow(r, power));
    return b;
}

double sup_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

namespace detail {

double indicator_node::eval(const double* x, int d) const {
    return region.contains(std::span<const double>(x, d)) ? scale : 0.0;
}

double step_node::eval(const double* x, int d) const {
    std::array<std::int64_t, max_kernel_dim> k{};
    for (int i = 0; i < d; ++i) k[i] = static_cast<std::int64_t>(std::floor((x[i] - origin[i]) / span));
    return cells.at(std::span<const std::int64_t>(k.data(), d));
}

double sum_node::eval(const double* x, int d) const {
    double s = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) s += coeffs[i] * terms[i]->eval(x, d);
    return s;
}

double dilate_node::eval(const double* x, int d) const {
    std::array<double, max_kernel_dim> y{};
    for (int i = 0; i < d; ++i) y[i] = factor * x[i];
    return child->eval(y.data(), d);
}

double translate_node::eval(const double* x, int d) const {
    std::array<double, max_kernel_dim> y{};
    for (int i = 0; i < d; ++i) y[i] = x[i] - shift[i];
    return child->eval(y.data(), d);
}

double restrict_node::eval(const double* x, int d) const {
    if (!region.contains(std::span<const double>(x, d))) return 0.0;
    return child->eval(x, d);
}

}  // namespace detail

namespace {

double box_radius(const box& b) {
    double r = 0.0;
    for (int i = 0; i < b.dim(); ++i) r = std::max({r, std::abs(b.lo[i]), std::abs(b.hi[i])});
    return r;
}

// Effective certificate: bounded support becomes C = 0 beyond its radius.
std::optional<decay_certificate> effective(const kernel_meta& m) {
    if (m.support) {
        decay_certificate c;
        c.C = 0.0;
        c.eta = 0.0;
        c.radius = std::max(1.0, box_radius(*m.support));
        return c;
    }
    return m.decay;
}

// sup_{r >= R} r^(e) exp(-rate r^p) for e >= 0
double poly_exp_sup(double e, double rate, double p, double R) {
    if (e <= 0.0) return std::pow(R, e) * std::exp(-rate * std::pow(R, p));
    double rs = std::pow(e / (rate * p), 1.0 / p);
    rs = std::max(rs, R);
    return std::pow(rs, e) * std::exp(-rate * std::pow(rs, p));
}

std::optional<decay_certificate> combine_sum(const std::vector<std::optional<decay_certificate>>& certs,
                                             const std::vector<double>& coeffs) {
    double R = 1.0;
    bool any = false;
    for (const auto& c : certs) {
        if (!c) return std::nullopt;
        R = std::max(R, c->radius);
        if (c->C > 0.0) any = true;
    }
    decay_certificate out;
    out.radius = R;
    if (!any) {
        out.C = 0.0;
        return out;
    }
    // all active terms superpolynomial with a common power: keep the slowest rate
    bool all_super = true;
    double power = -1.0;
    for (const auto& c : certs) {
        if (c->C == 0.0) continue;
        if (!c->superpolynomial()) all_super = false;
        else if (power < 0.0) power = c->power;
        else if (c->power != power) all_super = false;
    }
    if (all_super) {
        double rate = std::numeric_limits<double>::infinity();
        double eta = std::numeric_limits<double>::infinity();
        for (const auto& c : certs)
            if (c->C > 0.0) {
                rate = std::min(rate, c->rate);
                eta = std::min(eta, c->eta);
            }
        double C = 0.0;
        for (std::size_t i = 0; i < certs.size(); ++i) {
            const auto& c = *certs[i];
            if (c.C == 0.0) continue;
            C += std::abs(coeffs[i]) * c.C * std::pow(R, eta - c.eta);
        }
        out.C = C;
        out.eta = eta;
        out.rate = rate;
        out.power = power;
        return out;
    }
    double eta = std::numeric_limits<double>::infinity();
    for (const auto& c : certs)
        if (c->C > 0.0 && !c->superpolynomial()) eta = std::min(eta, c->eta);
    double C = 0.0;
    for (std::size_t i = 0; i < certs.size(); ++i) {
        const auto& c = *certs[i];
        if (c.C == 0.0) continue;
        double k;
        if (c.superpolynomial())
            k = poly_exp_sup(eta - c.eta, c.rate, c.power, R);
        else
            k = std::pow(R, eta - c.eta);
        C += std::abs(coeffs[i]) * c.C * k;
    }
    out.C = C;
    out.eta = eta;
    return out;
}

void append_edges(std::vector<std::vector<double>>& out, const box& b) {
    for (int i = 0; i < b.dim(); ++i) {
        out[i].push_back(b.lo[i]);
        out[i].push_back(b.hi[i]);
    }
}

void collect_breakpoints(const detail::node& n, int d, std::vector<std::vector<double>>& out) {
    using namespace detail;
    switch (n.kind) {
        case node_kind::function: return;
        case node_kind::indicator: append_edges(out, static_cast<const indicator_node&>(n).region); return;
        case node_kind::step: {
            const auto& s = static_cast<const step_node&>(n);
            const auto& w = s.cells.window();
            for (int i = 0; i < d; ++i)
                for (std::int64_t k = w.lo[i]; k <= w.hi[i]; ++k) out[i].push_back(s.origin[i] + s.span * static_cast<double>(k));
            return;
        }
        case node_kind::sum:
            for (const auto& t : static_cast<const sum_node&>(n).terms) collect_breakpoints(*t, d, out);
            return;
        case node_kind::scale: collect_breakpoints(*static_cast<const scale_node&>(n).child, d, out); return;
        case node_kind::dilate: {
            const auto& s = static_cast<const dilate_node&>(n);
            std::vector<std::vector<double>> inner(d);
            collect_breakpoints(*s.child, d, inner);
            for (int i = 0; i < d; ++i)
                for (double v : inner[i]) out[i].push_back(v / s.factor);
            return;
        }
        case node_kind::translate: {
            const auto& s = static_cast<const translate_node&>(n);
            std::vector<std::vector<double>> inner(d);
            collect_breakpoints(*s.child, d, inner);
            for (int i = 0; i < d; ++i)
                for (double v : inner[i]) out[i].push_back(v + s.shift[i]);
            return;
        }
        case node_kind::restrict_to: {
            const auto& s = static_cast<const restrict_node&>(n);
            collect_breakpoints(*s.child, d, out);
            append_edges(out, s.region);
            return;
        }
    }
}

}  // namespace

kernel::kernel(int dim, detail::node_ptr root, kernel_meta meta) : dim_(dim), root_(std::move(root)), meta_(std::move(meta)) {
    if (dim < 1 || dim > max_kernel_dim) throw std::invalid_argument("kernel: dimension must be in [1, 8]");
}

kernel kernel::from_function(int dim, std::function<double(std::span<const double>)> f, kernel_meta meta) {
    if (!f) throw std::invalid_argument("kernel: empty function");
    return kernel(dim, std::make_shared<detail::function_node>(std::move(f)), std::move(meta));
}

kernel kernel::zero(int dim) {
    kernel_meta m;
    m.support = box::cube(dim, 0.0, 0.0);
    m.continuous = true;
    m.description = "0";
    return kernel(dim, std::make_shared<detail::indicator_node>(box::cube(dim, 0.0, 0.0), 0.0), m);
}

kernel kernel::constant(int dim, double c) {
    kernel_meta m;
    m.continuous = true;
    m.description = std::to_string(c);
    if (c == 0.0) return zero(dim);
    decay_certificate cert;
    cert.C = std::abs(c);
    cert.eta = 0.0;
    m.decay = cert;
    return kernel(dim, std::make_shared<detail::function_node>([c](std::span<const double>) { return c; }), m);
}

kernel kernel::indicator(const box& b, double scale) {
    kernel_meta m;
    m.support = b;
    m.continuous = false;
    m.description = "indicator";
    return kernel(b.dim(), std::make_shared<detail::indicator_node>(b, scale), m);
}

kernel kernel::step(const cell_array& u) {
    const int d = u.dim();
    kernel_meta m;
    box b(std::vector<double>(static_cast<std::size_t>(d)), std::vector<double>(static_cast<std::size_t>(d)));
    for (int i = 0; i < d; ++i) {
        b.lo[i] = u.h() * static_cast<double>(u.window().lo[i]);
        b.hi[i] = u.h() * static_cast<double>(u.window().hi[i]);
    }
    m.support = b;
    m.continuous = false;
    m.description = "step";
    return kernel(d, std::make_shared<detail::step_node>(u, std::vector<double>(d, 0.0), u.h()), m);
}

double kernel::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("kernel: point dimension mismatch");
    return root_->eval(x.data(), dim_);
}

double kernel::operator()(double x) const {
    if (dim_ != 1) throw std::invalid_argument("kernel: scalar evaluation needs d = 1");
    return root_->eval(&x, 1);
}

kernel kernel::with_decay(decay_certificate c) const {
    kernel k = *this;
    k.meta_.decay = c;
    return k;
}

kernel kernel::with_support(box b) const {
    kernel k = *this;
    k.meta_.support = std::move(b);
    return k;
}

kernel kernel::with_description(std::string d) const {
    kernel k = *this;
    k.meta_.description = std::move(d);
    return k;
}

kernel kernel::dilate(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("kernel::dilate: factor must be > 0");
    using namespace detail;
    kernel_meta m = meta_;
    m.description = "dilate(" + meta_.description + ")";
    if (meta_.support) m.support = meta_.support->scaled(c);
    if (meta_.decay) {
        decay_certificate d = *meta_.decay;
        d.C = d.C * std::pow(c, -d.eta);
        d.rate = d.rate * std::pow(c, d.power);
        d.radius = d.radius / c;
        m.decay = d;
    }
    // keep exact structure for piecewise-constant nodes
    if (root_->kind == node_kind::indicator) {
        const auto& n = static_cast<const indicator_node&>(*root_);
        return kernel(dim_, std::make_shared<indicator_node>(n.region.scaled(c), n.scale), m);
    }
    if (root_->kind == node_kind::step) {
        const auto& n = static_cast<const step_node&>(*root_);
        std::vector<double> o = n.origin;
        for (double& v : o) v /= c;
        return kernel(dim_, std::make_shared<step_node>(n.cells, o, n.span / c), m);
    }
    if (root_->kind == node_kind::dilate) {
        const auto& n = static_cast<const dilate_node&>(*root_);
        return kernel(dim_, std::make_shared<dilate_node>(n.child, n.factor * c), m);
    }
    return kernel(dim_, std::make_shared<dilate_node>(root_, c), m);
}

kernel kernel::translate(std::span<const double> t) const {
    using namespace detail;
    if (static_cast<int>(t.size()) != dim_) throw std::invalid_argument("kernel::translate: shift dimension mismatch");
    kernel_meta m = meta_;
    m.description = "translate(" + meta_.description + ")";
    if (meta_.support) m.support = meta_.support->shifted(t);
    if (meta_.decay) {
        decay_certificate d = *meta_.decay;
        const double tn = sup_norm(t);
        // |x - t| >= |x| / 2 once |x| >= 2 (R + |t|)
        d.radius = 2.0 * (d.radius + tn);
        d.C = d.C * std::max(std::pow(2.0, d.eta), std::pow(1.5, -d.eta));
        if (d.rate > 0.0) d.rate = d.rate / std::pow(2.0, d.power);
        m.decay = d;
    }
    std::vector<double> s(t.begin(), t.end());
    if (root_->kind == node_kind::indicator) {
        const auto& n = static_cast<const indicator_node&>(*root_);
        return kernel(dim_, std::make_shared<indicator_node>(n.region.shifted(t), n.scale), m);
    }
    if (root_->kind == node_kind::step) {
        const auto& n = static_cast<const step_node&>(*root_);
        std::vector<double> o = n.origin;
        for (int i = 0; i < dim_; ++i) o[i] += t[i];
        return kernel(dim_, std::make_shared<step_node>(n.cells, o, n.span), m);
    }
    return kernel(dim_, std::make_shared<translate_node>(root_, s), m);
}

kernel kernel::translate(double t) const { return translate(std::span<const double>(&t, 1)); }

kernel kernel::restrict_to(const box& b) const {
    using namespace detail;
    if (b.dim() != dim_) throw std::invalid_argument("kernel::restrict_to: box dimension mismatch");
    kernel_meta m = meta_;
    m.description = "restrict(" + meta_.description + ")";
    m.support = meta_.support ? meta_.support->intersect(b) : b;
    m.continuous = false;
    if (root_->kind == node_kind::indicator) {
        const auto& n = static_cast<const indicator_node&>(*root_);
        return kernel(dim_, std::make_shared<indicator_node>(n.region.intersect(b), n.scale), m);
    }
    return kernel(dim_, std::make_shared<restrict_node>(root_, b), m);
}

kernel kernel::operator-() const { return -1.0 * *this; }

kernel operator*(double c, const kernel& a) {
    using namespace detail;
    kernel_meta m = a.meta_;
    m.description = std::to_string(c) + "*(" + a.meta_.description + ")";
    if (m.decay) m.decay->C *= std::abs(c);
    if (a.root_->kind == node_kind::scale) {
        const auto& n = static_cast<const scale_node&>(*a.root_);
        return kernel(a.dim_, std::make_shared<scale_node>(n.child, n.factor * c), m);
    }
    return kernel(a.dim_, std::make_shared<scale_node>(a.root_, c), m);
}

kernel operator+(const kernel& a, const kernel& b) {
    using namespace detail;
    if (a.dim_ != b.dim_) throw std::invalid_argument("kernel sum: dimension mismatch");
    kernel_meta m;
    m.description = a.meta_.description + " + " + b.meta_.description;
    m.continuous = a.meta_.continuous && b.meta_.continuous;
    if (a.meta_.support && b.meta_.support) m.support = a.meta_.support->hull(*b.meta_.support);
    if (!m.support) m.decay = combine_sum({effective(a.meta_), effective(b.meta_)}, {1.0, 1.0});
    std::vector<node_ptr> terms;
    std::vector<double> coeffs;
    auto absorb = [&](const kernel& k) {
        if (k.root_->kind == node_kind::sum) {
            const auto& s = static_cast<const sum_node&>(*k.root_);
            terms.insert(terms.end(), s.terms.begin(), s.terms.end());
            coeffs.insert(coeffs.end(), s.coeffs.begin(), s.coeffs.end());
        } else if (k.root_->kind == node_kind::scale) {
            const auto& s = static_cast<const scale_node&>(*k.root_);
            terms.push_back(s.child);
            coeffs.push_back(s.factor);
        } else {
            terms.push_back(k.root_);
            coeffs.push_back(1.0);
        }
    };
    absorb(a);
    absorb(b);
    return kernel(a.dim_, std::make_shared<sum_node>(std::move(terms), std::move(coeffs)), m);
}

kernel operator-(const kernel& a, const kernel& b) { return a + (-1.0) * b; }

std::vector<std::vector<double>> kernel::breakpoints() const {
    std::vector<std::vector<double>> out(dim_);
    collect_breakpoints(*root_, dim_, out);
    for (auto& v : out) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return out;
}

}  // namespace stablenoise
