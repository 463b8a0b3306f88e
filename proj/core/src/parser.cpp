#include "stablenoise/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <vector>

namespace stablenoise {

namespace {

enum class op { num, var, neg, add, sub, mul, div, call, ind };
enum class fn { pow, abs, exp, max, min, sin, cos, sqrt, log };

struct ast;
using ast_ptr = std::shared_ptr<const ast>;

struct ast {
    op kind = op::num;
    double value = 0.0;
    int var = 0;
    fn f = fn::abs;
    std::vector<ast_ptr> args;
    box region;
    bool has_var = false;
};

ast_ptr make_num(double v) {
    auto a = std::make_shared<ast>();
    a->kind = op::num;
    a->value = v;
    return a;
}

double eval(const ast& a, const double* x) {
    switch (a.kind) {
        case op::num: return a.value;
        case op::var: return x[a.var];
        case op::neg: return -eval(*a.args[0], x);
        case op::add: return eval(*a.args[0], x) + eval(*a.args[1], x);
        case op::sub: return eval(*a.args[0], x) - eval(*a.args[1], x);
        case op::mul: return eval(*a.args[0], x) * eval(*a.args[1], x);
        case op::div: return eval(*a.args[0], x) / eval(*a.args[1], x);
        case op::ind: return a.region.contains(std::span<const double>(x, a.region.dim())) ? 1.0 : 0.0;
        case op::call: {
            const double u = eval(*a.args[0], x);
            switch (a.f) {
                case fn::pow: return std::pow(u, eval(*a.args[1], x));
                case fn::abs: return std::abs(u);
                case fn::exp: return std::exp(u);
                case fn::max: return std::max(u, eval(*a.args[1], x));
                case fn::min: return std::min(u, eval(*a.args[1], x));
                case fn::sin: return std::sin(u);
                case fn::cos: return std::cos(u);
                case fn::sqrt: return std::sqrt(u);
                case fn::log: return std::log(u);
            }
        }
    }
    return 0.0;
}

class parser {
public:
    parser(const std::string& s, int dim) : s_(s), dim_(dim) {}

    ast_ptr parse() {
        ast_ptr e = expr();
        skip();
        if (i_ != s_.size()) throw parse_error("unexpected '" + std::string(1, s_[i_]) + "'", i_);
        return e;
    }

private:
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool accept(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw parse_error(std::string("expected '") + c + "'", i_);
    }

    ast_ptr binary(op k, ast_ptr l, ast_ptr r) {
        // fold constants
        if (!l->has_var && l->kind == op::num && !r->has_var && r->kind == op::num) {
            auto tmp = std::make_shared<ast>();
            tmp->kind = k;
            tmp->args = {l, r};
            return make_num(eval(*tmp, nullptr));
        }
        // (-a) * b is analyzed as -(a * b) so signs stay visible at the top
        if ((k == op::mul || k == op::div) && (l->kind == op::num && l->value < 0.0)) return negate(binary(k, make_num(-l->value), r));
        if ((k == op::mul || k == op::div) && (r->kind == op::num && r->value < 0.0)) return negate(binary(k, l, make_num(-r->value)));
        // numeric factors move to the right: 5*x*x is analyzed as (x*x)*5
        if (k == op::mul && l->kind == op::num && r->has_var) return binary(k, r, l);
        if (k == op::mul && l->kind == op::mul && l->args[1]->kind == op::num && r->has_var)
            return binary(k, binary(k, l->args[0], r), l->args[1]);
        if ((k == op::mul || k == op::div) && (l->kind == op::neg || r->kind == op::neg)) {
            ast_ptr inner = l->kind == op::neg ? binary(k, l->args[0], r) : binary(k, l, r->args[0]);
            return negate(inner);
        }
        auto a = std::make_shared<ast>();
        a->kind = k;
        a->args = {std::move(l), std::move(r)};
        a->has_var = a->args[0]->has_var || a->args[1]->has_var;
        return a;
    }

    static ast_ptr negate(ast_ptr u) {
        if (u->kind == op::num) return make_num(-u->value);
        if (u->kind == op::neg) return u->args[0];
        auto a = std::make_shared<ast>();
        a->kind = op::neg;
        a->args = {u};
        a->has_var = u->has_var;
        return a;
    }

    ast_ptr expr() {
        ast_ptr l = term();
        for (;;) {
            if (accept('+'))
                l = binary(op::add, l, term());
            else if (accept('-'))
                l = binary(op::sub, l, term());
            else
                return l;
        }
    }

    ast_ptr term() {
        ast_ptr l = unary();
        for (;;) {
            if (accept('*'))
                l = binary(op::mul, l, unary());
            else if (accept('/'))
                l = binary(op::div, l, unary());
            else
                return l;
        }
    }

    ast_ptr unary() {
        if (accept('-')) {
            return negate(unary());
        }
        if (accept('+')) return unary();
        return primary();
    }

    std::string ident() {
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        return s_.substr(start, i_ - start);
    }

    int coordinate(const std::string& id, std::size_t pos) {
        int idx = -1;
        if (id == "x") idx = 0;
        else if (id == "y") idx = 1;
        else if (id == "z") idx = 2;
        else if (id.size() >= 2 && id[0] == 'x' && std::all_of(id.begin() + 1, id.end(), ::isdigit)) {
            idx = std::atoi(id.c_str() + 1) - 1;
            if (idx < 0) throw parse_error("coordinates are numbered from x1", pos);
        }
        if (idx < 0) return -1;
        if (idx >= dim_)
            throw parse_error("coordinate '" + id + "' exceeds dimension " + std::to_string(dim_), pos);
        return idx;
    }

    double constant_arg(std::size_t pos) {
        ast_ptr e = expr();
        if (e->has_var || e->kind != op::num) throw parse_error("box bounds must be constants", pos);
        return e->value;
    }

    ast_ptr indicator(std::size_t pos) {
        expect('(');
        std::vector<double> lo, hi;
        do {
            skip();
            std::size_t p = i_;
            if (ident() != "box") throw parse_error("indicator expects box(a,b) arguments", p);
            expect('(');
            lo.push_back(constant_arg(i_));
            expect(',');
            hi.push_back(constant_arg(i_));
            expect(')');
        } while (accept(','));
        expect(')');
        if (static_cast<int>(lo.size()) != dim_)
            throw parse_error("indicator needs one box per coordinate (" + std::to_string(dim_) + ")", pos);
        auto a = std::make_shared<ast>();
        a->kind = op::ind;
        a->region = box(lo, hi);
        a->has_var = true;
        return a;
    }

    ast_ptr primary() {
        skip();
        if (i_ >= s_.size()) throw parse_error("unexpected end of expression", i_);
        const std::size_t pos = i_;
        const char c = s_[i_];
        if (c == '(') {
            ++i_;
            ast_ptr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const double v = std::strtod(s_.c_str() + i_, &end);
            if (end == s_.c_str() + i_) throw parse_error("bad number", i_);
            i_ = static_cast<std::size_t>(end - s_.c_str());
            return make_num(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::string id = ident();
            if (id == "pi") return make_num(std::numbers::pi);
            if (id == "indicator") return indicator(pos);
            const int coord = coordinate(id, pos);
            if (coord >= 0) {
                auto a = std::make_shared<ast>();
                a->kind = op::var;
                a->var = coord;
                a->has_var = true;
                return a;
            }
            static const std::array<std::pair<const char*, fn>, 9> table = {{{"pow", fn::pow},
                                                                           {"abs", fn::abs},
                                                                           {"exp", fn::exp},
                                                                           {"max", fn::max},
                                                                           {"min", fn::min},
                                                                           {"sin", fn::sin},
                                                                           {"cos", fn::cos},
                                                                           {"sqrt", fn::sqrt},
                                                                           {"log", fn::log}}};
            for (const auto& [name, f] : table) {
                if (id != name) continue;
                const int arity = (f == fn::pow || f == fn::max || f == fn::min) ? 2 : 1;
                expect('(');
                std::vector<ast_ptr> args;
                args.push_back(expr());
                for (int k = 1; k < arity; ++k) {
                    expect(',');
                    args.push_back(expr());
                }
                expect(')');
                auto a = std::make_shared<ast>();
                a->kind = op::call;
                a->f = f;
                a->args = std::move(args);
                a->has_var = std::any_of(a->args.begin(), a->args.end(), [](const ast_ptr& p) { return p->has_var; });
                if (!a->has_var) return make_num(eval(*a, nullptr));
                return a;
            }
            throw parse_error("unknown identifier '" + id + "'", pos);
        }
        throw parse_error("unexpected '" + std::string(1, c) + "'", pos);
    }

    const std::string& s_;
    int dim_;
    std::size_t i_ = 0;
};

// ---- envelope analysis -------------------------------------------------

// bound of the form c |x_S|^k - D, |x_S| = max over coordinates in S
struct lin {
    double c = 0.0;
    double k = 0.0;
    double D = 0.0;
    unsigned S = 0;
};

struct info {
    // |f| <~ |x|^-eta exp(-rate |x|^pw) for large |x|
    bool up = false;
    double eta = 0.0;
    double rate = 0.0;
    double pw = 1.0;
    std::optional<double> B;  // |f| <= B everywhere
    std::optional<lin> L;     // f >= L
    std::optional<lin> U;     // f <= -U
    std::optional<lin> M;     // |f| >= M
    std::optional<box> support;
    bool has_ind = false;
    bool singular = false;
};

struct analyzer {
    int dim;
    unsigned all;

    static bool grows(const lin& l) { return l.c > 0.0 && l.k > 0.0; }
    static bool positive(const std::optional<lin>& l) { return l && l->c >= 0.0 && l->D < 0.0; }

    static lin lin_add(const lin& a, const lin& b) {
        if (a.c > 0.0 && b.c > 0.0) {
            const double c = std::min(a.c, b.c);
            return {c, std::min(a.k, b.k), a.D + b.D + c, a.S | b.S};
        }
        if (a.c > 0.0) return {a.c, a.k, a.D + b.D, a.S};
        if (b.c > 0.0) return {b.c, b.k, a.D + b.D, b.S};
        return {0.0, 0.0, a.D + b.D, 0};
    }

    // lower bound of a nonnegative quantity raised to s > 0
    static lin lin_pow(const lin& a, double s) {
        if (grows(a) && a.D <= 0.0) return {std::pow(a.c, s), a.k * s, 0.0, a.S};
        if (grows(a)) {
            const double R = a.D > 0.0 ? std::pow(2.0 * a.D / a.c, 1.0 / a.k) : 0.0;
            const double c = std::pow(a.c / 2.0, s);
            return {c, a.k * s, c * std::pow(R, a.k * s), a.S};
        }
        if (a.D < 0.0) return {0.0, 0.0, -std::pow(-a.D, s), 0};
        return {0.0, 0.0, 0.0, 0};
    }

    static lin lin_mul(const lin& a, const lin& b) {
        // both lower bounds of nonnegative quantities
        if (grows(a) && grows(b) && a.S == b.S && a.D <= 0.0 && b.D <= 0.0) return {a.c * b.c, a.k + b.k, 0.0, a.S};
        if (grows(a) && grows(b) && a.S == b.S) {
            const lin pa = lin_pow(a, 1.0), pb = lin_pow(b, 1.0);
            const double Ra = a.D > 0.0 ? std::pow(2.0 * a.D / a.c, 1.0 / a.k) : 0.0;
            const double Rb = b.D > 0.0 ? std::pow(2.0 * b.D / b.c, 1.0 / b.k) : 0.0;
            const double R = std::max(Ra, Rb);
            const double c = pa.c * pb.c;
            return {c, a.k + b.k, c * std::pow(R, a.k + b.k), a.S};
        }
        if (!grows(a) && !grows(b) && a.D < 0.0 && b.D < 0.0) return {0.0, 0.0, -(a.D * b.D), 0};
        if (grows(a) && !grows(b) && b.D < 0.0) return {a.c * -b.D, a.k, a.D * -b.D, a.S};
        if (grows(b) && !grows(a) && a.D < 0.0) return {b.c * -a.D, b.k, b.D * -a.D, b.S};
        return {0.0, 0.0, 0.0, 0};
    }

    static std::optional<lin> better(const std::optional<lin>& a, const std::optional<lin>& b) {
        if (!a) return b;
        if (!b) return a;
        if (grows(*a) != grows(*b)) return grows(*a) ? a : b;
        if (grows(*a)) {
            if (a->k != b->k) return a->k > b->k ? a : b;
            if (a->c != b->c) return a->c > b->c ? a : b;
            return a->D <= b->D ? a : b;
        }
        return a->D <= b->D ? a : b;
    }

    static std::optional<lin> scale_lin(const std::optional<lin>& l, double v) {
        if (!l) return l;
        return lin{l->c * v, l->k, l->D * v, l->S};
    }

    void finish(info& r) const {
        r.M = better(r.M, better(r.L, r.U));
        if (r.B && !r.up) {
            r.up = true;
            r.eta = 0.0;
            r.rate = 0.0;
        }
    }

    static double eff_eta(const info& a) {
        if (a.support) return std::numeric_limits<double>::infinity();
        return a.rate > 0.0 ? std::numeric_limits<double>::infinity() : a.eta;
    }

    static void up_add(const info& a, const info& b, info& r) {
        if (a.support && b.support) {
            r.support = a.support->hull(*b.support);
            return;
        }
        if (a.support) {
            r.up = b.up, r.eta = b.eta, r.rate = b.rate, r.pw = b.pw;
            return;
        }
        if (b.support) {
            r.up = a.up, r.eta = a.eta, r.rate = a.rate, r.pw = a.pw;
            return;
        }
        if (!a.up || !b.up) return;
        r.up = true;
        if (a.rate > 0.0 && b.rate > 0.0) {
            r.eta = std::min(a.eta, b.eta);
            r.rate = std::min(a.rate, b.rate);
            r.pw = std::min(a.pw, b.pw);
        } else {
            r.eta = std::min(eff_eta(a), eff_eta(b));
            r.rate = 0.0;
        }
    }

    static void up_mul(const info& a, const info& b, info& r) {
        if (a.support && b.support) r.support = a.support->intersect(*b.support);
        else if (a.support && b.up) r.support = a.support;
        else if (b.support && a.up) r.support = b.support;
        if (r.support) return;
        if (!a.up || !b.up) return;
        r.up = true;
        r.eta = a.eta + b.eta;
        if (a.rate > 0.0 && b.rate > 0.0 && a.pw == b.pw) {
            r.rate = a.rate + b.rate;
            r.pw = a.pw;
        } else if (a.rate > 0.0 && (b.rate == 0.0 || a.pw > b.pw)) {
            r.rate = a.rate;
            r.pw = a.pw;
        } else if (b.rate > 0.0) {
            r.rate = b.rate;
            r.pw = b.pw;
        }
    }

    static bool match_shift(const ast& a, const ast& b, std::optional<double>& delta) {
        if (a.kind == op::var) {
            double d = 0.0;
            int v = -1;
            if (b.kind == op::var) v = b.var;
            else if ((b.kind == op::sub || b.kind == op::add) && b.args[0]->kind == op::var && b.args[1]->kind == op::num) {
                v = b.args[0]->var;
                d = b.kind == op::sub ? b.args[1]->value : -b.args[1]->value;
            }
            if (v != a.var) return false;
            if (delta && *delta != d) return false;
            delta = d;
            return true;
        }
        if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
        if (a.kind == op::num) return a.value == b.value;
        if (a.kind == op::call && a.f != b.f) return false;
        if (a.kind == op::ind) return false;
        for (std::size_t i = 0; i < a.args.size(); ++i)
            if (!match_shift(*a.args[i], *b.args[i], delta)) return false;
        return true;
    }

    info run(const ast& a) const {
        info r;
        switch (a.kind) {
            case op::num: {
                const double v = a.value;
                r.B = std::abs(v);
                r.L = lin{0.0, 0.0, -v, 0};
                r.U = lin{0.0, 0.0, v, 0};
                r.M = lin{0.0, 0.0, -std::abs(v), 0};
                if (v == 0.0) r.support = box::cube(dim, 0.0, 0.0);
                break;
            }
            case op::var:
                r.up = true;
                r.eta = -1.0;
                r.M = lin{1.0, 1.0, 0.0, 1u << a.var};
                break;
            case op::neg: {
                const info x = run(*a.args[0]);
                r = x;
                r.L = x.U;
                r.U = x.L;
                break;
            }
            case op::add:
            case op::sub: {
                const info x = run(*a.args[0]);
                info y = run(*a.args[1]);
                if (a.kind == op::sub) std::swap(y.L, y.U);
                r.has_ind = x.has_ind || y.has_ind;
                r.singular = x.singular || y.singular;
                up_add(x, y, r);
                if (x.B && y.B) r.B = *x.B + *y.B;
                if (x.L && y.L) r.L = lin_add(*x.L, *y.L);
                if (x.U && y.U) r.U = lin_add(*x.U, *y.U);
                if (x.M && grows(*x.M) && y.B) r.M = lin{x.M->c, x.M->k, x.M->D + *y.B, x.M->S};
                if (y.M && grows(*y.M) && x.B) r.M = better(r.M, lin{y.M->c, y.M->k, y.M->D + *x.B, y.M->S});
                if (a.kind == op::sub && dim == 1 && x.up && !r.support) {
                    std::optional<double> delta;
                    if (match_shift(*a.args[0], *a.args[1], delta) && delta && *delta != 0.0 && x.rate == 0.0) {
                        // l(x) - l(x - delta) behaves like delta l'(x)
                        r.up = true;
                        r.eta = x.eta + 1.0;
                        r.rate = 0.0;
                    }
                }
                break;
            }
            case op::mul: {
                const info x = run(*a.args[0]);
                const info y = run(*a.args[1]);
                r.has_ind = x.has_ind || y.has_ind;
                r.singular = x.singular || y.singular;
                up_mul(x, y, r);
                if (x.B && y.B) r.B = *x.B * *y.B;
                const ast* cnum = a.args[0]->kind == op::num ? a.args[0].get() : (a.args[1]->kind == op::num ? a.args[1].get() : nullptr);
                const info& other = cnum == a.args[0].get() ? y : x;
                if (cnum) {
                    const double v = cnum->value;
                    if (v >= 0.0) {
                        r.L = scale_lin(other.L, v);
                        r.U = scale_lin(other.U, v);
                    } else {
                        r.L = scale_lin(other.U, -v);
                        r.U = scale_lin(other.L, -v);
                    }
                    r.M = scale_lin(other.M, std::abs(v));
                    if (v == 0.0) r.support = box::cube(dim, 0.0, 0.0);
                } else if (x.M && y.M) {
                    const lin m = lin_mul(*x.M, *y.M);
                    r.M = m;
                    // a square is nonnegative
                    if (a.args[0].get() == a.args[1].get() || match_identical(*a.args[0], *a.args[1])) r.L = m;
                }
                break;
            }
            case op::div: {
                const info x = run(*a.args[0]);
                const info y = run(*a.args[1]);
                r.has_ind = x.has_ind || y.has_ind;
                r.singular = x.singular || y.singular;
                if (a.args[1]->kind == op::num) {
                    const double v = a.args[1]->value;
                    r = x;
                    if (x.B) r.B = *x.B / std::abs(v);
                    if (v > 0.0) {
                        r.L = scale_lin(x.L, 1.0 / v);
                        r.U = scale_lin(x.U, 1.0 / v);
                    } else {
                        r.L = scale_lin(x.U, -1.0 / v);
                        r.U = scale_lin(x.L, -1.0 / v);
                    }
                    r.M = scale_lin(x.M, 1.0 / std::abs(v));
                    break;
                }
                const bool bounded_away = positive(y.L) || positive(y.U) || (y.M && !grows(*y.M) && y.M->D < 0.0);
                if (!bounded_away) r.singular = true;
                if (x.support) r.support = x.support;
                if (y.M && grows(*y.M) && y.M->S == all && x.up && !r.singular) {
                    r.up = true;
                    r.eta = x.eta + y.M->k;
                    r.rate = x.rate;
                    r.pw = x.pw;
                } else if (bounded_away && x.up) {
                    r.up = true;
                    r.eta = x.eta;
                    r.rate = x.rate;
                    r.pw = x.pw;
                }
                break;
            }
            case op::ind:
                r.has_ind = true;
                r.support = a.region;
                r.B = 1.0;
                r.L = lin{0.0, 0.0, 0.0, 0};
                break;
            case op::call: r = call(a); break;
        }
        finish(r);
        return r;
    }

    static bool match_identical(const ast& a, const ast& b) {
        if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
        if (a.kind == op::num) return a.value == b.value;
        if (a.kind == op::var) return a.var == b.var;
        if (a.kind == op::call && a.f != b.f) return false;
        if (a.kind == op::ind) return false;
        for (std::size_t i = 0; i < a.args.size(); ++i)
            if (!match_identical(*a.args[i], *b.args[i])) return false;
        return true;
    }

    info call(const ast& a) const {
        info r;
        const info x = run(*a.args[0]);
        r.has_ind = x.has_ind;
        r.singular = x.singular;
        switch (a.f) {
            case fn::abs:
                r.up = x.up, r.eta = x.eta, r.rate = x.rate, r.pw = x.pw;
                r.B = x.B;
                r.support = x.support;
                r.M = x.M;
                r.L = better(x.M, lin{0.0, 0.0, 0.0, 0});
                break;
            case fn::sqrt:
            case fn::pow: {
                double s = 0.5;
                if (a.f == fn::pow) {
                    if (a.args[1]->kind != op::num) {
                        r.singular = true;
                        break;
                    }
                    s = a.args[1]->value;
                }
                if (s > 0.0) {
                    r.support = x.support;
                    if (x.up) {
                        r.up = true;
                        r.eta = x.eta * s;
                        r.rate = x.rate * s;
                        r.pw = x.pw;
                    }
                    if (x.B) r.B = std::pow(*x.B, s);
                    if (x.M) r.M = lin_pow(*x.M, s);
                    r.L = better(r.M, lin{0.0, 0.0, 0.0, 0});
                } else if (s == 0.0) {
                    r.B = 1.0;
                } else {
                    const bool away = x.M && ((grows(*x.M) && x.M->D <= 0.0) || (!grows(*x.M) && x.M->D < 0.0));
                    if (!away) r.singular = true;
                    if (x.M && grows(*x.M) && x.M->S == all) {
                        r.up = true;
                        r.eta = -x.M->k * s;
                    } else if (x.M && !grows(*x.M) && x.M->D < 0.0) {
                        r.B = std::pow(-x.M->D, s);
                    }
                    if (x.B && away) r.M = lin{0.0, 0.0, -std::pow(*x.B, s), 0};
                    r.L = lin{0.0, 0.0, 0.0, 0};
                }
                break;
            }
            case fn::exp:
                r.L = lin{0.0, 0.0, 0.0, 0};
                if (x.U && grows(*x.U) && x.U->S == all) {
                    r.up = true;
                    r.eta = 0.0;
                    r.rate = x.U->c;
                    r.pw = x.U->k;
                    r.B = std::exp(x.U->D);
                } else if (x.U) {
                    r.B = std::exp(x.U->D);
                } else if (x.B) {
                    r.B = std::exp(*x.B);
                }
                if (x.L && !grows(*x.L)) r.M = lin{0.0, 0.0, -std::exp(-x.L->D), 0};
                break;
            case fn::sin:
            case fn::cos:
                r.B = 1.0;
                if (a.f == fn::sin) r.support = x.support;
                break;
            case fn::log: {
                const bool away = positive(x.L);
                if (!away) r.singular = true;
                if (x.up || x.B) {
                    r.up = true;
                    r.eta = -0.05;
                }
                break;
            }
            case fn::max:
            case fn::min: {
                const info y = run(*a.args[1]);
                r.has_ind = r.has_ind || y.has_ind;
                r.singular = r.singular || y.singular;
                if (x.up && y.up) {
                    r.up = true;
                    r.eta = std::min(eff_eta(x), eff_eta(y));
                    if (x.rate > 0.0 && y.rate > 0.0) {
                        r.eta = std::min(x.eta, y.eta);
                        r.rate = std::min(x.rate, y.rate);
                        r.pw = std::min(x.pw, y.pw);
                    }
                }
                if (x.B && y.B) r.B = std::max(*x.B, *y.B);
                const bool is_max = a.f == fn::max;
                // max(g, 0) or min(g, 0) vanish where g has the other sign
                const info* g = nullptr;
                const ast* zero = nullptr;
                if (a.args[1]->kind == op::num && a.args[1]->value == 0.0) g = &x, zero = a.args[1].get();
                else if (a.args[0]->kind == op::num && a.args[0]->value == 0.0) g = &y, zero = a.args[0].get();
                if (zero) {
                    const std::optional<lin>& side = is_max ? g->U : g->L;
                    if (side && grows(*side) && side->S == all) {
                        const double R = std::pow(std::max(side->D, 0.0) / side->c, 1.0 / side->k);
                        r.support = box::cube(dim, -R, R);
                    }
                    r.up = g->up, r.eta = g->eta, r.rate = g->rate, r.pw = g->pw;
                    if (g->B) r.B = g->B;
                }
                if (is_max) {
                    r.L = better(x.L, y.L);
                    if (x.U && y.U) r.U = lin_max(*x.U, *y.U);
                } else {
                    r.U = better(x.U, y.U);
                    if (x.L && y.L) r.L = lin_max(*x.L, *y.L);
                }
                break;
            }
        }
        return r;
    }

    // weaker of two simultaneous bounds, covering the union of coordinates
    static lin lin_max(const lin& a, const lin& b) {
        if (grows(a) && grows(b)) {
            const double c = std::min(a.c, b.c);
            return {c, std::min(a.k, b.k), std::max(a.D, b.D) + c, a.S | b.S};
        }
        return {0.0, 0.0, std::max(a.D, b.D), 0};
    }
};

double max_literal(const ast& a) {
    double m = 0.0;
    if (a.kind == op::num) m = std::abs(a.value);
    // frequencies of bounded factors do not move the decay onset
    if (a.kind == op::call && (a.f == fn::sin || a.f == fn::cos)) return 0.0;
    if (a.kind == op::ind)
        for (int i = 0; i < a.region.dim(); ++i) m = std::max({m, std::abs(a.region.lo[i]), std::abs(a.region.hi[i])});
    for (const auto& c : a.args) m = std::max(m, max_literal(*c));
    return m;
}

std::vector<std::vector<double>> probe_directions(int dim) {
    std::vector<std::vector<double>> dirs;
    for (int i = 0; i < dim; ++i)
        for (double s : {1.0, -1.0}) {
            std::vector<double> v(dim, 0.0);
            v[i] = s;
            dirs.push_back(v);
        }
    if (dim > 1) {
        for (double s : {1.0, -1.0}) dirs.emplace_back(dim, s);
        // a few fixed off-axis directions
        for (int j = 0; j < 8; ++j) {
            std::vector<double> v(dim);
            for (int i = 0; i < dim; ++i) v[i] = std::sin(1.7 * (j + 1) * (i + 1) + 0.3 * j);
            const double n = sup_norm(v);
            for (double& e : v) e /= n;
            dirs.push_back(v);
        }
    }
    return dirs;
}

// Smallest C making |f| <= C r^-eta exp(-rate r^pw) on probe points beyond R.
std::optional<decay_certificate> calibrate(const std::function<double(std::span<const double>)>& f, int dim,
                                           double eta, double rate, double pw, double R) {
    double logC = -std::numeric_limits<double>::infinity();
    const auto dirs = probe_directions(dim);
    std::vector<double> x(dim);
    for (int j = 0; j < 64; ++j) {
        const double r = R * std::pow(10.0, 6.0 * j / 63.0);
        for (const auto& d : dirs) {
            for (int i = 0; i < dim; ++i) x[i] = r * d[i];
            const double v = std::abs(f(x));
            if (!std::isfinite(v)) return std::nullopt;
            if (v == 0.0) continue;
            logC = std::max(logC, std::log(v) + eta * std::log(r) + rate * std::pow(r, pw));
        }
    }
    decay_certificate c;
    c.eta = eta;
    c.rate = rate;
    c.power = pw;
    c.radius = R;
    c.C = std::isfinite(logC) ? 2.0 * std::exp(logC) : 1e-300;
    if (!std::isfinite(c.C)) return std::nullopt;
    return c;
}

struct lowering {
    int dim;

    bool self_certified(const kernel& k) const {
        if (k.support()) return true;
        return k.decay() && (k.decay()->superpolynomial() || k.decay()->eta > 0.0);
    }

    kernel leaf(const ast_ptr& a, const std::string& text) const {
        if (a->kind == op::num) return kernel::constant(dim, a->value);
        analyzer an{dim, (1u << dim) - 1u};
        const info r = an.run(*a);
        kernel_meta m;
        m.description = text;
        m.continuous = !r.has_ind && !r.singular;
        auto fn = [a](std::span<const double> x) { return eval(*a, x.data()); };
        if (r.support) m.support = r.support;
        else if (r.up) {
            const double R = std::max(1.0, 2.0 * max_literal(*a));
            m.decay = calibrate(fn, dim, r.eta, r.rate, r.pw, R);
        }
        return kernel::from_function(dim, fn, m);
    }

    kernel lower(const ast_ptr& a, const std::string& text) const {
        switch (a->kind) {
            case op::ind: return kernel::indicator(a->region).with_description(text);
            case op::neg: return -lower(a->args[0], text);
            case op::add:
            case op::sub: {
                kernel l = lower(a->args[0], text);
                kernel r = lower(a->args[1], text);
                if (self_certified(l) && self_certified(r))
                    return (a->kind == op::add ? l + r : l - r).with_description(text);
                return leaf(a, text);
            }
            case op::mul: {
                if (a->args[0]->kind == op::num) return a->args[0]->value * lower(a->args[1], text);
                if (a->args[1]->kind == op::num) return a->args[1]->value * lower(a->args[0], text);
                if (a->args[0]->kind == op::ind) return lower(a->args[1], text).restrict_to(a->args[0]->region);
                if (a->args[1]->kind == op::ind) return lower(a->args[0], text).restrict_to(a->args[1]->region);
                return leaf(a, text);
            }
            case op::div:
                if (a->args[1]->kind == op::num) return (1.0 / a->args[1]->value) * lower(a->args[0], text);
                return leaf(a, text);
            default: return leaf(a, text);
        }
    }
};

}  // namespace

kernel parse_kernel(const std::string& expr, int dim) {
    if (dim < 1 || dim > max_kernel_dim) throw std::invalid_argument("parse_kernel: dimension must be in [1, 8]");
    parser p(expr, dim);
    const ast_ptr a = p.parse();
    lowering lw{dim};
    return lw.lower(a, expr).with_description(expr);
}

}  // namespace stablenoise
