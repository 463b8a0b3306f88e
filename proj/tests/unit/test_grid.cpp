#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "stablenoise/errors.hpp"
#include "stablenoise/grid_noise.hpp"
#include "stablenoise/grid_ops.hpp"
#include "stablenoise/parser.hpp"
#include "stablenoise/space.hpp"
#include "stablenoise/verify.hpp"

using namespace stablenoise;

namespace {

prepare_options no_lump() {
    prepare_options o;
    o.far_field = false;
    return o;
}

}  // namespace

TEST_SUITE("kernel") {
    TEST_CASE("boxes and windows") {
        const box b({0.0, -1.0}, {2.0, 1.0});
        CHECK(b.volume() == 4.0);
        const double in[2] = {0.0, 0.5}, out[2] = {2.0, 0.0};
        CHECK(b.contains(in));
        CHECK_FALSE(b.contains(out));
        CHECK(b.scaled(2.0).hi[0] == 1.0);
        CHECK(b.intersect(box({3.0, 0.0}, {4.0, 1.0})).empty());
        const index_window w({-1, 0}, {2, 3});
        CHECK(w.size() == 9);
        std::int64_t k[2];
        for (std::size_t j = 0; j < w.size(); ++j) {
            w.index_of(j, k);
            CHECK(w.linear(k) == j);
        }
    }

    TEST_CASE("combinators") {
        const kernel f = kernel::indicator(box::cube(1, 0.0, 1.0), 2.0);
        CHECK(f(0.5) == 2.0);
        CHECK(f(1.0) == 0.0);
        CHECK(f.dilate(2.0)(0.4) == 2.0);
        CHECK(f.dilate(2.0)(0.6) == 0.0);
        CHECK(f.dilate(2.0).support()->hi[0] == 0.5);
        CHECK(f.translate(3.0)(3.5) == 2.0);
        CHECK((f - f)(0.5) == 0.0);
        CHECK((3.0 * f + f)(0.5) == 8.0);
        CHECK(f.breakpoints()[0] == std::vector<double>{0.0, 1.0});
    }

    TEST_CASE("parser") {
        const kernel ind = parse_kernel("indicator(box(0,1))", 1);
        CHECK(ind(0.0) == 1.0);
        CHECK(ind(0.999) == 1.0);
        CHECK(ind(1.0) == 0.0);
        CHECK(ind.support().has_value());

        const kernel e = parse_kernel("exp(-abs(x))", 1);
        REQUIRE(e.decay().has_value());
        CHECK(e.decay()->superpolynomial());
        CHECK(e(1.0) == doctest::Approx(std::exp(-1.0)));

        const kernel ma = parse_kernel("pow(max(x,0),0.25) - pow(max(x-1,0),0.25)", 1);
        CHECK(check_integrand(ma, 1.5).accepted(1.5));

        const kernel two = parse_kernel("x*y + 2*pi", 2);
        const double p[2] = {3.0, -1.0};
        CHECK(two(p) == doctest::Approx(-3.0 + 2.0 * std::numbers::pi));

        CHECK_THROWS_AS(parse_kernel("sin(", 1), parse_error);
        CHECK_THROWS_AS(parse_kernel("y", 1), parse_error);
        CHECK_THROWS_AS(parse_kernel("foo(x)", 1), parse_error);
    }
}

TEST_SUITE("grid_ops") {
    TEST_CASE("cell means") {
        const grid_spec g(0.5, index_window({0}, {2}));
        const cell_array lin = psi_h(parse_kernel("x", 1), g);
        CHECK(lin[0] == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(lin[1] == doctest::Approx(0.75).epsilon(1e-14));
        const cell_array ind = psi_h(kernel::indicator(box::cube(1, 0.0, 0.75)), g);
        CHECK(ind[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(ind[1] == doctest::Approx(0.5).epsilon(1e-14));
        const cell_array c = psi_h(kernel::constant(2, 3.0), grid_spec(0.1, index_window::cube(2, -2, 2)));
        for (double v : c.values()) CHECK(v == doctest::Approx(3.0).epsilon(1e-14));
    }

    TEST_CASE("projection") {
        const grid_spec g(0.5, index_window({0}, {2}));
        const kernel t = tilde_psi_h(parse_kernel("x", 1).restrict_to(box::cube(1, 0.0, 1.0)), g);
        CHECK(t(0.1) == doctest::Approx(0.25));
        CHECK(t(0.7) == doctest::Approx(0.75));
        // a step function on the same grid is a fixed point
        const cell_array u(0.5, index_window({-2}, {3}), {1.0, -2.0, 0.5, 4.0, 3.0});
        const kernel s = kernel::step(u);
        const cell_array back = psi_h(s, grid_spec(0.5, u.window()));
        for (std::size_t i = 0; i < u.size(); ++i) CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-14));
        for (std::size_t i = 0; i < u.size(); ++i) CHECK(phi_h(cell_array(0.5, u.window()))(-1.0 + 0.5 * i) == 0.0);
    }

    TEST_CASE("norm of a step function") {
        const cell_array u(0.25, index_window({-3}, {4}), {1.0, -2.0, 0.5, 4.0, 3.0, 0.0, -1.5});
        for (double a : {0.7, 1.5, 2.0}) {
            const double direct = lp_pow(phi_h(u), a).value;
            CHECK(direct == doctest::Approx(0.25 * u.lp_pow(a)).epsilon(1e-10));
        }
    }

    TEST_CASE("filter equals the nested-loop sum") {
        const grid_spec g(0.2, index_window({-6}, {6}));
        const cell_array u = psi_h(parse_kernel("exp(-x*x)", 1), g);
        const filter_spec c = filter_spec::explicit_coefficients(index_window({-2}, {3}), {0.5, -1.0, 2.0, 0.25, 1.5},
                                                                 filter_regime::summable);
        const cell_array v = filter_cells(u, c);
        for (std::int64_t l = v.window().lo[0]; l < v.window().hi[0]; ++l) {
            double s = 0.0;
            for (std::int64_t k = -6; k < 6; ++k)
                for (std::int64_t j = -2; j <= 2; ++j)
                    if (k - l == j) s += u[static_cast<std::size_t>(k + 6)] * c.coeff1(j);
            const std::int64_t idx[1] = {l};
            CHECK(v.at(idx) == doctest::Approx(s).epsilon(1e-14).scale(1.0));
        }
        const cell_array same = filter_cells(u, filter_spec::identity(1));
        for (std::int64_t k = -6; k < 6; ++k) {
            const std::int64_t idx[1] = {k};
            CHECK(same.at(idx) == u.at(idx));
        }
    }

    TEST_CASE("summable filter converges to C f") {
        const kernel f = parse_kernel("exp(-x*x)", 1);
        const filter_spec c = filter_spec::geometric(0.5, 20);
        double prev = 1e300;
        for (double h : {0.2, 0.1, 0.05}) {
            const grid_spec g(1, h);
            grid_spec gw = g;
            gw.window = g.cover(box::cube(1, -6.0, 6.0));
            const double e = lp_distance_pow(tilde_psi_h_c(f, c, gw), c.sum() * f, 1.5).value;
            CHECK(e < prev);
            prev = e;
        }
    }

    TEST_CASE("integrand checks") {
        CHECK(check_integrand(kernel::indicator(box::cube(1, 0.0, 1.0)), 0.3).accepted(0.3));
        CHECK(check_integrand(kernel::indicator(box::cube(2, 0.0, 1.0)), 1.7).accepted(1.7));
        CHECK_FALSE(check_integrand(parse_kernel("pow(1+abs(x),-1.5)", 1), 0.5).accepted(0.5));
        const kernel g = parse_kernel("pow(1+abs(x),-1)", 1);
        const integrand_report r = check_integrand(g, 1.5);
        CHECK(r.accepted(1.5));
        // int (1 + |x|)^-1.5 = 2 * 2
        CHECK(r.norm_pow == doctest::Approx(4.0).epsilon(1e-6));
        CHECK_FALSE(check_integrand(parse_kernel("pow(1+abs(x),-0.5)", 1), 1.5).accepted(1.5));
    }

    TEST_CASE("integral parameters") {
        const stable_params u = integral_params(kernel::indicator(box::cube(2, 0.0, 1.0)), 1.5, 0.4);
        CHECK(u.sigma == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(u.nu == doctest::Approx(0.4).epsilon(1e-12));
        const stable_params e = integral_params(parse_kernel("exp(-abs(x))", 1), 1.5, 1.0);
        CHECK(e.sigma == doctest::Approx(std::pow(4.0 / 3.0, 1.0 / 1.5)).epsilon(1e-8));
        CHECK(e.nu == doctest::Approx(1.0).epsilon(1e-8));
        const stable_params e3 = integral_params(3.0 * parse_kernel("exp(-abs(x))", 1), 1.5, 1.0);
        CHECK(e3.sigma == doctest::Approx(3.0 * e.sigma).epsilon(1e-8));
    }
}

TEST_SUITE("grid_noise") {
    const stable_params S15(1.5, 1.3, 0.0);

    TEST_CASE("zero kernel") {
        const grid_noise n(grid_spec(1, 0.1), innovation_sampler::exact(S15, 3));
        CHECK(n.eval(kernel::indicator(box::cube(1, 0.0, 1.0), 0.0), 0) == 0.0);
    }

    TEST_CASE("single cell") {
        const double h = 0.25;
        const innovation_sampler xi = innovation_sampler::exact(S15, 4);
        const grid_noise n(grid_spec(1, h), xi);
        // f = 3 on [0.5, 0.6) inside cell k = 2
        const kernel f = kernel::indicator(box::cube(1, 0.5, 0.6), 3.0);
        const double v = 0.3;
        for (std::uint64_t r = 0; r < 5; ++r) {
            const double expect = std::pow(1.3, -1.0) * std::pow(h, 1.0 / 1.5 - 1.0) * xi.at1(2, r) * v;
            CHECK(n.prepare(f, no_lump()).eval(xi, r) == doctest::Approx(expect).epsilon(1e-12));
        }
    }

    TEST_CASE("linearity on a path") {
        // a fixed window, so every kernel sees the same innovations
        const innovation_sampler xi = innovation_sampler::pareto({1.5, 0.5, 0.5}, 5);
        const grid_noise n(grid_spec(0.1, index_window({-80}, {80})), xi);
        const kernel f = parse_kernel("exp(-x*x)", 1), g = kernel::indicator(box::cube(1, -1.0, 2.0));
        for (std::uint64_t r = 0; r < 3; ++r)
            CHECK(n.eval(2.0 * f - g, r) == doctest::Approx(2.0 * n.eval(f, r) - n.eval(g, r)).epsilon(1e-10));
    }

    TEST_CASE("dirac comb equals the plain noise of the sampled step") {
        const double h = 0.1;
        const innovation_sampler xi = innovation_sampler::exact(S15, 6);
        const grid_noise n(grid_spec(1, h), xi);
        const kernel f = parse_kernel("max(1-abs(x),0)", 1).with_support(box::cube(1, -1.0, 1.0));
        const index_window w({-10}, {11});
        std::vector<double> vals;
        for (std::int64_t k = -10; k <= 10; ++k) vals.push_back(f(h * static_cast<double>(k)));
        const kernel step = kernel::step(cell_array(h, w, vals));
        for (std::uint64_t r = 0; r < 4; ++r)
            CHECK(n.prepare_dirac(f, no_lump()).eval(xi, r) == doctest::Approx(n.prepare(step, no_lump()).eval(xi, r)).epsilon(1e-12));
    }

    TEST_CASE("identity filter equals the plain noise") {
        const innovation_sampler xi = innovation_sampler::exact(S15, 7);
        const grid_noise n(grid_spec(1, 0.2), xi);
        const kernel f = kernel::indicator(box::cube(1, 0.0, 1.0));
        for (std::uint64_t r = 0; r < 4; ++r)
            CHECK(n.eval_filtered(f, filter_spec::identity(1), r) == doctest::Approx(n.prepare(f, no_lump()).eval(xi, r)).epsilon(1e-13));
    }

    TEST_CASE("filtered noise equals the nested sum") {
        const double h = 0.25;
        const innovation_sampler xi = innovation_sampler::exact(S15, 8);
        const grid_noise n(grid_spec(h, index_window({0}, {20})), xi);
        const kernel f = parse_kernel("x*x", 1).restrict_to(box::cube(1, 0.0, 5.0));
        const filter_spec c = filter_spec::geometric(0.5, 3);
        const cell_array u = psi_h(f, grid_spec(h, index_window({0}, {20})));
        const double gam = std::pow(1.3, -1.0) * std::pow(h, 1.0 / 1.5);
        for (std::uint64_t r = 0; r < 3; ++r) {
            double s = 0.0;
            for (std::int64_t k = 0; k < 20; ++k)
                for (std::int64_t l = k - 3; l <= k + 3; ++l) s += u[static_cast<std::size_t>(k)] * c.coeff1(k - l) * xi.at1(l, r);
            CHECK(n.prepare_filtered(f, c, no_lump()).eval(xi, r) == doctest::Approx(gam * s).epsilon(1e-12));
        }
    }

    TEST_CASE("gaussian variance") {
        const grid_noise n(grid_spec(1, 0.25), innovation_sampler::gaussian(1.0, 9));
        const noise_functional nf = n.prepare(kernel::indicator(box::cube(1, 0.0, 1.0)), no_lump());
        std::vector<double> x(200000);
        for (std::size_t r = 0; r < x.size(); ++r) x[r] = nf.eval(n.innovations(), r);
        CHECK(describe(x).variance == doctest::Approx(2.0).epsilon(0.02));
    }

    TEST_CASE("error bound") {
        const stable_params p(1.5, 1.0, 0.0);
        const kernel f = kernel::indicator(box::cube(1, -1.0, 1.5));
        CHECK(error_bound(f, f, grid_spec(1, 0.25), 1.0, p) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(stable_abs_moment(2.0, 1.0) == doctest::Approx(1.1283791671).epsilon(1e-9));
        const kernel g = parse_kernel("exp(-x*x)", 1);
        const kernel gm = g.restrict_to(box::cube(1, -2.0, 2.0));
        const grid_spec gs(1, 0.1);
        const double norm = std::pow(lp_distance_pow(tilde_psi_h(gm, [&] {
                                                         grid_spec w = gs;
                                                         w.window = gs.cover(box::cube(1, -2.0, 2.0));
                                                         return w;
                                                     }()),
                                                     g, 1.5)
                                         .value,
                                     1.0 / 1.5);
        CHECK(error_bound(g, gm, gs, 1.0, p) == doctest::Approx(stable_abs_moment(1.5, 1.0) * norm).epsilon(1e-6));
    }

    TEST_CASE("scaling transport") {
        const grid_noise n(grid_spec(1, 0.25), innovation_sampler::exact(S15, 10));
        for (std::uint64_t r = 0; r < 3; ++r) {
            const auto [l1, r1] = scaling_transport(n, kernel::indicator(box::cube(1, 0.0, 1.0)), 2.0, r);
            CHECK(l1 == doctest::Approx(r1).epsilon(1e-12));
            const auto [l2, r2] = scaling_transport(n, parse_kernel("exp(-x*x)", 1), 0.5, r);
            CHECK(l2 == doctest::Approx(r2).epsilon(1e-10));
            const auto [l3, r3] = scaling_transport(n, parse_kernel("exp(-x*x)", 1), 1.0, r);
            CHECK(l3 == r3);
        }
    }

    TEST_CASE("processes") {
        const innovation_sampler xi = innovation_sampler::exact(S15, 11);
        const grid_noise n(grid_spec(1, 0.1), xi);
        const kernel a = kernel::indicator(box::cube(1, 0.0, 1.0)), b = kernel::indicator(box::cube(1, 2.0, 3.0));
        const auto v = simulate_process(n, {a, b}, 2);
        CHECK(v[0] == doctest::Approx(n.eval(a, 2)).epsilon(1e-13));
        CHECK(v[1] == doctest::Approx(n.eval(b, 2)).epsilon(1e-13));
        const auto ta = n.prepare(a).touched(), tb = n.prepare(b).touched();
        for (const auto& k : ta) CHECK(std::find(tb.begin(), tb.end(), k) == tb.end());
    }

    TEST_CASE("rejections") {
        const grid_noise n(grid_spec(1, 0.1), innovation_sampler::exact(stable_params(0.5, 1.0, 0.0), 12));
        CHECK_THROWS_AS(n.eval(parse_kernel("pow(1+abs(x),-1.5)", 1), 0), integrand_rejected);
        CHECK_THROWS_AS(n.eval_dirac(kernel::indicator(box::cube(1, 0.0, 1.0)), 0), integrand_rejected);
    }
}
