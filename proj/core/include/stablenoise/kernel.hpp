#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stablenoise {

inline constexpr int max_kernel_dim = 8;

// Half-open box [lo, hi).
struct box {
    std::vector<double> lo;
    std::vector<double> hi;

    box() = default;
    box(std::vector<double> l, std::vector<double> h);
    static box cube(int dim, double a, double b);

    int dim() const { return static_cast<int>(lo.size()); }
    bool empty() const;
    double volume() const;
    bool contains(std::span<const double> x) const;
    box intersect(const box& o) const;
    box hull(const box& o) const;
    // Image under x -> x / c (the support of x -> f(c x)).
    box scaled(double c) const;
    box shifted(std::span<const double> t) const;
};

// Half-open integer ranges [lo_i, hi_i) per dimension.
struct index_window {
    std::vector<std::int64_t> lo;
    std::vector<std::int64_t> hi;

    index_window() = default;
    index_window(std::vector<std::int64_t> l, std::vector<std::int64_t> h);
    static index_window cube(int dim, std::int64_t a, std::int64_t b);

    int dim() const { return static_cast<int>(lo.size()); }
    std::size_t size() const;
    std::size_t extent(int i) const { return static_cast<std::size_t>(hi[i] - lo[i]); }
    bool contains(std::span<const std::int64_t> k) const;
    // Row-major with the last dimension fastest.
    void index_of(std::size_t linear, std::span<std::int64_t> k) const;
    std::size_t linear(std::span<const std::int64_t> k) const;
    index_window hull(const index_window& o) const;
    index_window grown(std::int64_t by) const;
};

// Values on lattice cells h(k + [0,1)^d), zero outside the window.
class cell_array {
public:
    cell_array() = default;
    cell_array(double h, index_window w);
    cell_array(double h, index_window w, std::vector<double> values);

    double h() const { return h_; }
    int dim() const { return window_.dim(); }
    const index_window& window() const { return window_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double at(std::span<const std::int64_t> k) const;
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    // sum |u_k|^alpha
    double lp_pow(double alpha) const;

    std::string to_csv() const;

private:
    double h_ = 1.0;
    index_window window_;
    std::vector<double> values_;
};

// |f(x)| <= C |x|^-eta exp(-rate |x|^power) whenever |x|_inf >= radius.
// eta may be negative (growth).
struct decay_certificate {
    double C = 1.0;
    double eta = 0.0;
    double rate = 0.0;
    double power = 1.0;
    double radius = 1.0;

    double bound(double r) const;
    bool superpolynomial() const { return rate > 0.0 && power > 0.0; }
    // Certificate implies |x|^-eta' decay for every eta' when superpolynomial.
    bool decays_faster_than(double eta_needed) const { return superpolynomial() || eta > eta_needed; }
};

struct kernel_meta {
    std::optional<box> support;
    std::optional<decay_certificate> decay;
    bool continuous = false;
    std::string description;
};

namespace detail {

enum class node_kind { function, indicator, step, sum, scale, dilate, translate, restrict_to };

struct node {
    explicit node(node_kind k) : kind(k) {}
    virtual ~node() = default;
    virtual double eval(const double* x, int d) const = 0;
    node_kind kind;
};

using node_ptr = std::shared_ptr<const node>;

struct function_node final : node {
    function_node(std::function<double(std::span<const double>)> fn) : node(node_kind::function), f(std::move(fn)) {}
    double eval(const double* x, int d) const override { return f(std::span<const double>(x, d)); }
    std::function<double(std::span<const double>)> f;
};

struct indicator_node final : node {
    indicator_node(box b, double s) : node(node_kind::indicator), region(std::move(b)), scale(s) {}
    double eval(const double* x, int d) const override;
    box region;
    double scale;
};

// Cells origin + span (k + [0,1)^d).
struct step_node final : node {
    step_node(cell_array c, std::vector<double> o, double s)
        : node(node_kind::step), cells(std::move(c)), origin(std::move(o)), span(s) {}
    double eval(const double* x, int d) const override;
    cell_array cells;
    std::vector<double> origin;
    double span;
};

struct sum_node final : node {
    sum_node(std::vector<node_ptr> t, std::vector<double> c)
        : node(node_kind::sum), terms(std::move(t)), coeffs(std::move(c)) {}
    double eval(const double* x, int d) const override;
    std::vector<node_ptr> terms;
    std::vector<double> coeffs;
};

struct scale_node final : node {
    scale_node(node_ptr c, double s) : node(node_kind::scale), child(std::move(c)), factor(s) {}
    double eval(const double* x, int d) const override { return factor * child->eval(x, d); }
    node_ptr child;
    double factor;
};

// x -> child(c x)
struct dilate_node final : node {
    dilate_node(node_ptr ch, double c) : node(node_kind::dilate), child(std::move(ch)), factor(c) {}
    double eval(const double* x, int d) const override;
    node_ptr child;
    double factor;
};

// x -> child(x - shift)
struct translate_node final : node {
    translate_node(node_ptr ch, std::vector<double> s) : node(node_kind::translate), child(std::move(ch)), shift(std::move(s)) {}
    double eval(const double* x, int d) const override;
    node_ptr child;
    std::vector<double> shift;
};

// child * 1_region
struct restrict_node final : node {
    restrict_node(node_ptr ch, box b) : node(node_kind::restrict_to), child(std::move(ch)), region(std::move(b)) {}
    double eval(const double* x, int d) const override;
    node_ptr child;
    box region;
};

}  // namespace detail

// Integrand f: R^d -> R with support / decay / continuity metadata.
class kernel {
public:
    kernel() = default;

    static kernel from_function(int dim, std::function<double(std::span<const double>)> f, kernel_meta meta);
    static kernel zero(int dim);
    static kernel constant(int dim, double c);
    static kernel indicator(const box& b, double scale = 1.0);
    // Piecewise constant x -> u_[x/h], the lattice embedding of a cell array.
    static kernel step(const cell_array& u);

    int dim() const { return dim_; }
    bool valid() const { return static_cast<bool>(root_); }
    double operator()(std::span<const double> x) const;
    double operator()(double x) const;  // d = 1 convenience

    const std::optional<box>& support() const { return meta_.support; }
    const std::optional<decay_certificate>& decay() const { return meta_.decay; }
    bool continuous() const { return meta_.continuous; }
    const std::string& description() const { return meta_.description; }
    const kernel_meta& meta() const { return meta_; }

    kernel with_decay(decay_certificate c) const;
    kernel with_support(box b) const;
    kernel with_description(std::string d) const;

    // x -> f(c x), c > 0
    kernel dilate(double c) const;
    // x -> f(x - t)
    kernel translate(std::span<const double> t) const;
    kernel translate(double t) const;
    // f * 1_b
    kernel restrict_to(const box& b) const;

    kernel operator-() const;
    friend kernel operator+(const kernel& a, const kernel& b);
    friend kernel operator-(const kernel& a, const kernel& b);
    friend kernel operator*(double c, const kernel& a);
    friend kernel operator*(const kernel& a, double c) { return c * a; }

    // Coordinates (per dimension) where f may jump; sorted, unique.
    std::vector<std::vector<double>> breakpoints() const;

    const detail::node_ptr& root() const { return root_; }

private:
    kernel(int dim, detail::node_ptr root, kernel_meta meta);

    int dim_ = 0;
    detail::node_ptr root_;
    kernel_meta meta_;
};

// |x|_inf
double sup_norm(std::span<const double> x);

}  // namespace stablenoise
