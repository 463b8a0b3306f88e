#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "stablenoise/levy.hpp"
#include "stablenoise/shot_noise.hpp"
#include "stablenoise/space.hpp"
#include "stablenoise/verify.hpp"

using namespace stablenoise;

TEST_SUITE("shot_noise") {
    const space_ptr unit = make_box_space(box::cube(1, 0.0, 1.0));

    TEST_CASE("empty clouds") {
        const auto G = innovation_sampler::exact(stable_params(1.5, 1.0, 0.0), 1);
        const point_cloud c = sample_poisson_cloud(*unit, 0.0, G, 0);
        CHECK(c.size() == 0);
        CHECK(shot_noise_eval(c, [](std::span<const double>) { return 1.0; }) == 0.0);
        CHECK(binomial_noise_eval(*unit, 0, G, [](std::span<const double>) { return 1.0; }, 0) == 0.0);
    }

    TEST_CASE("poisson counts and marks") {
        const auto G = innovation_sampler::exact(stable_params(2.0, 1.0, 0.0), 2);
        std::vector<double> counts, marks;
        for (std::uint64_t r = 0; r < 10000; ++r) {
            const point_cloud c = sample_poisson_cloud(*unit, 100.0, G, r);
            counts.push_back(static_cast<double>(c.size()));
            if (r < 2000) marks.insert(marks.end(), c.marks.begin(), c.marks.end());
            for (double p : c.points) {
                CHECK(p >= 0.0);
                CHECK(p < 1.0);
            }
        }
        CHECK(std::abs(describe(counts).mean - 100.0) < 0.3);
        CHECK(describe(counts).variance == doctest::Approx(100.0).epsilon(0.05));
        CHECK(describe(marks).variance == doctest::Approx(2.0).epsilon(0.02));
    }

    TEST_CASE("zero kernel on a cloud") {
        const auto G = innovation_sampler::pareto({1.5, 0.5, 0.5}, 3);
        const point_cloud c = sample_poisson_cloud(*unit, 50.0, G, 1);
        CHECK(c.size() > 0);
        CHECK(shot_noise_eval(c, [](std::span<const double>) { return 0.0; }) == 0.0);
        CHECK(c.gamma == doctest::Approx(std::pow(50.0, -1.0 / 1.5) / G.limit().sigma));
    }

    TEST_CASE("integrability") {
        CHECK(check_shot_integrand(*unit, [](std::span<const double> x) { return std::cos(x[0]); }, 0.7));
        CHECK(check_shot_integrand(*unit, [](std::span<const double> x) { return x[0] < 0.5 ? 1.0 : 0.0; }, 1.5));
        std::string why;
        CHECK_FALSE(check_shot_integrand(*unit, [](std::span<const double> x) { return std::pow(x[0], -0.9); }, 1.5, &why));
        CHECK_FALSE(why.empty());
        CHECK(check_shot_integrand(*unit, [](std::span<const double> x) { return std::pow(x[0], -0.6); }, 1.5));
    }

    TEST_CASE("binomial sums of stable marks are stable") {
        const stable_params p(1.5, 1.0, 0.0);
        const auto G = innovation_sampler::exact(p, 4);
        std::vector<double> x(20000);
        for (std::size_t r = 0; r < x.size(); ++r)
            x[r] = binomial_noise_eval(*unit, 30, G, [](std::span<const double>) { return 1.0; }, r);
        CHECK(ks_two_sample(x, sample_stable(p, 20000, 77)).pvalue > 0.01);
    }

    TEST_CASE("finite-lambda char fn matches the cloud") {
        const auto G = innovation_sampler::pareto({1.5, 0.5, 0.5}, 5);
        const space_fn f = [](std::span<const double> x) { return 1.0 - x[0]; };
        std::vector<double> v(40000);
        for (std::size_t r = 0; r < v.size(); ++r) v[r] = shot_noise_eval(sample_poisson_cloud(*unit, 20.0, G, r), f);
        for (double t : {0.5, 1.0, 2.0})
            CHECK(std::abs(empirical_char_fn(v, t) - shot_noise_char_fn(*unit, 20.0, G, f, t)) < 0.02);
    }
}

TEST_SUITE("levy") {
    TEST_CASE("hemispheres") {
        const std::vector<double> m = {0.0, 0.0, 1.0};
        CHECK(hemisphere_contains(m, m));
        CHECK(hemisphere_contains(m, std::vector<double>{1.0, 0.0, 0.0}));
        CHECK_FALSE(hemisphere_contains(m, std::vector<double>{0.0, 0.0, -1.0}));
    }

    TEST_CASE("symmetric differences") {
        const std::vector<double> O = {0.0, 0.0, 1.0}, anti = {0.0, 0.0, -1.0};
        counter_stream s(derive_key(1, 0), 0, stream_tag::oracle);
        const space_ptr S2 = make_sphere_space(2);
        std::vector<double> x(3);
        for (int i = 0; i < 1000; ++i) {
            S2->sample(s, x);
            CHECK(symdiff_indicator(O, O, x) == 0);
            CHECK(symdiff_indicator(O, anti, x) == 1);
        }
        // d(O, m) = pi / 3: mass d / pi
        const std::vector<double> m = {std::sin(std::numbers::pi / 3.0), 0.0, std::cos(std::numbers::pi / 3.0)};
        CHECK(geodesic_distance(O, m) == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-14));
        const int n = 200000;
        int hits = 0;
        for (int i = 0; i < n; ++i) {
            S2->sample(s, x);
            hits += symdiff_indicator(O, m, x);
        }
        const double phat = static_cast<double>(hits) / n;
        CHECK(std::abs(phat - 1.0 / 3.0) < 3.0 * std::sqrt(phat * (1.0 - phat) / n));
        const double q = S2->integrate([&](std::span<const double> e) { return static_cast<double>(symdiff_indicator(O, m, e)); }).value;
        CHECK(q == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
    }

    TEST_CASE("sphere points") {
        CHECK(north_pole(2) == std::vector<double>{0.0, 0.0, 1.0});
        CHECK_THROWS(check_sphere_point(std::vector<double>{1.0, 1.0, 0.0}));
        CHECK_NOTHROW(check_sphere_point(std::vector<double>{0.6, 0.8, 0.0}));
    }

    TEST_CASE("sphere field") {
        const auto G = innovation_sampler::exact(stable_params(1.5, 1.0, 0.0), 6);
        const sphere_point O = north_pole(2);
        const sphere_point a = {1.0, 0.0, 0.0}, b = {0.0, 0.6, 0.8};
        for (std::uint64_t r = 0; r < 5; ++r) {
            const auto v = sphere_levy({O, a, b}, O, 100.0, G, r);
            CHECK(v[0] == 0.0);
            // each value depends only on its own point
            CHECK(sphere_levy({b}, O, 100.0, G, r)[0] == v[2]);
        }
        CHECK_THROWS(sphere_levy({a}, O, 100.0, innovation_sampler::pareto({1.5, 1.0, 0.0}, 1), 0));
    }

    TEST_CASE("chentsov indicator") {
        const std::vector<double> zero = {0.0, 0.0}, m = {2.0, 0.0};
        CHECK(chentsov_indicator(zero, {{1.0, 0.0}, 0.5}) == 0);
        CHECK(chentsov_indicator(m, {{-1.0, 0.0}, 0.5}) == 0);
        CHECK(chentsov_indicator(m, {{0.0, 1.0}, 0.5}) == 0);
        CHECK(chentsov_indicator(m, {{1.0, 0.0}, 1.0}) == 1);
        CHECK(chentsov_indicator(m, {{1.0, 0.0}, 2.5}) == 0);
        // E <s, e>_+ on the circle is 1 / pi
        CHECK(chentsov_mass(2, 2.0) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-10));
    }

    TEST_CASE("chentsov field") {
        const auto G = innovation_sampler::exact(stable_params(1.5, 1.0, 0.0), 7);
        const std::vector<double> zero = {0.0, 0.0}, a = {0.3, 0.4}, far = {3.0, -1.0};
        for (std::uint64_t r = 0; r < 5; ++r) {
            const auto v = chentsov_levy({zero, a, far}, 50.0, G, r);
            CHECK(v[0] == 0.0);
            CHECK(chentsov_levy({a}, 50.0, G, r)[0] == v[1]);
        }
    }
}
