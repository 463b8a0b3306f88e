#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"
#include "stablenoise/quadrature.hpp"

using namespace stablenoise;

TEST_SUITE("quadrature") {
    TEST_CASE("gauss-legendre integrates polynomials exactly") {
        for (int n : {1, 3, 5, 8}) {
            const auto& r = quad::gauss_legendre(n);
            for (int deg = 0; deg < 2 * n; ++deg) {
                double s = 0.0;
                for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
                const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
                CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
            }
        }
    }

    TEST_CASE("adaptive") {
        quad::options o;
        o.abs_tol = 1e-13;
        o.rel_tol = 1e-12;
        CHECK(quad::adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, o).value == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(quad::adaptive([](double x) { return std::exp(x); }, 1.0, 0.0, o).value == doctest::Approx(1.0 - std::exp(1.0)).epsilon(1e-12));
        CHECK(quad::adaptive([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, o).value == doctest::Approx(0.29).epsilon(1e-10));
    }

    TEST_CASE("power singularities") {
        quad::options o;
        o.abs_tol = 1e-13;
        o.rel_tol = 1e-12;
        CHECK(quad::power_singular([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, -0.5, true, o).value ==
              doctest::Approx(2.0).epsilon(1e-11));
        // strong singularities need the singular point at 0: nearby doubles carry the mass
        CHECK(quad::power_singular([](double x) { return std::pow(-x, -0.8); }, -1.0, 0.0, -0.8, false, o).value ==
              doctest::Approx(5.0).epsilon(1e-10));
        CHECK(quad::power_singular([](double x) { return 1.0 / std::sqrt(x - 1.0); }, 1.0, 2.0, -0.5, true, o).value ==
              doctest::Approx(2.0).epsilon(1e-10));
        // int_0^1 x^-1/2 (1-x)^-1/2 = pi
        CHECK(quad::power_singular_both([](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }, 0.0, 1.0, -0.5, -0.5, o).value ==
              doctest::Approx(std::numbers::pi).epsilon(1e-10));
    }

    TEST_CASE("infinite ranges") {
        quad::options o;
        o.abs_tol = 1e-12;
        o.rel_tol = 1e-11;
        CHECK(quad::to_infinity([](double x) { return std::exp(-x); }, 0.0, 1.0, o).value == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(quad::from_minus_infinity([](double x) { return std::exp(-x * x); }, 0.0, 1.0, o).value ==
              doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-10));
        CHECK(quad::to_infinity([](double x) { return 1.0 / (x * x); }, 1.0, 1.0, o).value == doctest::Approx(1.0).epsilon(1e-7));
    }

    TEST_CASE("oscillatory tails") {
        // int_0^inf y^-s sin y = Gamma(1-s) cos(pi s / 2); the head [0, a] by tanh-sinh
        boost::math::quadrature::tanh_sinh<double> ts;
        for (double s : {0.3, 0.5, 0.8}) {
            const double a = 2.0;
            const double head = ts.integrate([s](double y) { return std::pow(y, -s) * std::sin(y); }, 0.0, a);
            const double tail = quad::fourier_tail(a, s, false).value;
            CHECK(head + tail == doctest::Approx(std::tgamma(1.0 - s) * std::cos(std::numbers::pi * s / 2.0)).epsilon(1e-9));
            const double chead = ts.integrate([s](double y) { return std::pow(y, -s) * std::cos(y); }, 0.0, a);
            CHECK(chead + quad::fourier_tail(a, s, true).value ==
                  doctest::Approx(std::tgamma(1.0 - s) * std::sin(std::numbers::pi * s / 2.0)).epsilon(1e-9));
        }
    }
}
