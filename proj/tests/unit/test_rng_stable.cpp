#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "stablenoise/parallel.hpp"
#include "stablenoise/rng.hpp"
#include "stablenoise/stable.hpp"
#include "stablenoise/verify.hpp"

using namespace stablenoise;

TEST_SUITE("rng") {
    TEST_CASE("philox known answers") {
        // published Philox4x32-10 test vectors
        CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == philox_block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
        CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
              philox_block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
        CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
              philox_block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    }

    TEST_CASE("streams are addressed, not sequential") {
        const philox_key k = derive_key(9, 4);
        counter_stream a(k, 17, stream_tag::innovation), b(k, 17, stream_tag::innovation);
        counter_stream c(k, 17, stream_tag::mark), d(k, 18, stream_tag::innovation);
        for (int i = 0; i < 10; ++i) {
            const auto x = a();
            CHECK(x == b());
            CHECK(x != c());
            CHECK(x != d());
        }
        CHECK(derive_key(9, 4).k0 != derive_key(9, 5).k0);
    }

    TEST_CASE("uniform stays inside the open interval") {
        counter_stream s(derive_key(1, 0), 0, stream_tag::oracle);
        double lo = 1.0, hi = 0.0, sum = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double u = s.uniform();
            lo = std::min(lo, u);
            hi = std::max(hi, u);
            sum += u;
        }
        CHECK(lo > 0.0);
        CHECK(hi < 1.0);
        CHECK(std::abs(sum / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n) * 1.5);
    }

    TEST_CASE("pack_index is injective on small indices") {
        std::vector<std::uint64_t> seen;
        for (std::int64_t i = -3; i <= 3; ++i)
            for (std::int64_t j = -3; j <= 3; ++j) {
                const std::int64_t k[2] = {i, j};
                seen.push_back(pack_index(k));
            }
        std::sort(seen.begin(), seen.end());
        CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    }

    TEST_CASE("replicate does not depend on the thread count") {
        const auto f = [](std::uint64_t r) {
            counter_stream s(derive_key(5, r), 0, stream_tag::innovation);
            return s.normal();
        };
        const auto a = replicate(1000, 1, f);
        CHECK(a == replicate(1000, 3, f));
        CHECK(a == replicate(1000, 8, f));
    }
}

TEST_SUITE("stable") {
    TEST_CASE("parameter validation") {
        CHECK_THROWS(stable_params(0.0, 1.0, 0.0));
        CHECK_THROWS(stable_params(2.1, 1.0, 0.0));
        CHECK_THROWS(stable_params(1.5, -1.0, 0.0));
        CHECK_THROWS(stable_params(1.5, 1.0, 1.5));
        CHECK_THROWS(stable_params(1.0, 1.0, 0.3));
        CHECK(stable_params(2.0, 1.0, 0.7).nu == 0.0);
    }

    TEST_CASE("characteristic function") {
        CHECK(stable_char_fn(0.0, stable_params(1.3, 2.0, 0.5)) == std::complex<double>(1.0, 0.0));
        const auto g = stable_char_fn(1.0, stable_params(2.0, 1.0, 0.0));
        CHECK(g.real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
        CHECK(g.imag() == 0.0);
        const auto c = stable_char_fn(-3.0, stable_params(1.0, 2.0, 0.0));
        CHECK(c.real() == doctest::Approx(std::exp(-6.0)).epsilon(1e-14));
        const auto a = stable_char_fn(0.7, stable_params(1.5, 1.2, 0.4));
        const auto b = stable_char_fn(-0.7, stable_params(1.5, 1.2, 0.4));
        CHECK(std::abs(a - std::conj(b)) < 1e-15);
    }

    TEST_CASE("zero scale gives zeros") {
        for (double v : sample_stable(stable_params(1.5, 0.0, 0.3), 1000, 3)) CHECK(v == 0.0);
    }

    TEST_CASE("gaussian case has variance 2 sigma^2") {
        const auto x = sample_stable(stable_params(2.0, 1.0, 0.0), 1000000, 11);
        CHECK(std::abs(describe(x).variance - 2.0) < 0.02);
    }

    TEST_CASE("empirical char fn of alpha = 1.5 draws") {
        const stable_params p(1.5, 1.0, 0.0);
        const auto x = sample_stable(p, 1000000, 12);
        for (double t : {0.5, 1.0, 2.0}) CHECK(std::abs(empirical_char_fn(x, t) - stable_char_fn(t, p)) < 0.01);
    }

    TEST_CASE("skewed draws match the char fn") {
        const stable_params p(1.2, 1.0, 0.8);
        const auto x = sample_stable(p, 400000, 13);
        for (double t : {-1.0, 0.5, 1.0, 2.0}) CHECK(std::abs(empirical_char_fn(x, t) - stable_char_fn(t, p)) < 0.01);
    }

    TEST_CASE("moment integrals against closed forms") {
        // int t^-a sin t = Gamma(1-a) cos(pi a / 2); int t^-a (1 - cos t) = -Gamma(1-a) sin(pi a / 2)
        for (double a : {0.3, 0.5, 0.9, 1.4, 1.8})
            CHECK(sine_moment_integral(a) == doctest::Approx(std::tgamma(1.0 - a) * std::cos(std::numbers::pi * a / 2.0)).epsilon(1e-8));
        for (double a : {1.2, 1.5, 2.5})
            CHECK(cosine_moment_integral(a) == doctest::Approx(-std::tgamma(1.0 - a) * std::sin(std::numbers::pi * a / 2.0)).epsilon(1e-8));
        CHECK(cosine_moment_integral(2.0) == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-8));
    }

    TEST_CASE("tail parameters") {
        CHECK(tail_to_params({1.5, 0.3, 0.3}).nu == 0.0);
        // sigma^(1/2) = int t^-1/2 sin t = sqrt(pi/2)
        CHECK(tail_to_params({0.5, 0.5, 0.5}).sigma == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-8));
        const stable_params one_sided = tail_to_params({1.5, 1.0, 0.0});
        CHECK(std::abs(one_sided.nu) <= 1.0);
        CHECK(one_sided.nu > 0.0);
    }

    TEST_CASE("absolute moments") {
        CHECK(stable_abs_moment(2.0, 1.0) == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-10));
        const auto x = sample_stable(stable_params(1.5, 1.0, 0.0), 400000, 14);
        double m = 0.0;
        for (double v : x) m += std::pow(std::abs(v), 0.5);
        CHECK(m / x.size() == doctest::Approx(stable_abs_moment(1.5, 0.5)).epsilon(0.01));
    }
}

TEST_SUITE("innovations") {
    TEST_CASE("gaussian mode") {
        CHECK_THROWS(make_innovation_sampler(innovation_mode::gaussian, stable_params(1.5, 1.0, 0.0), 1));
        const auto G = innovation_sampler::gaussian(1.5, 2);
        std::vector<double> x(400000);
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = G.at1(static_cast<std::int64_t>(k), 0);
        const auto st = describe(x);
        CHECK(std::abs(st.mean) < 4.0 * st.std_error);
        CHECK(st.variance == doctest::Approx(2.0 * 1.5 * 1.5).epsilon(0.015));
    }

    TEST_CASE("same index, same value") {
        const auto G = innovation_sampler::pareto({1.3, 0.4, 0.6}, 7);
        const std::int64_t k[2] = {3, -5};
        CHECK(G.at(k, 11) == G.at(k, 11));
        CHECK(G.at(k, 11) != G.at(k, 12));
        CHECK(G.at_packed(G.key(11), pack_index(k)) == G.at(k, 11));
    }

    TEST_CASE("pareto tails") {
        const auto G = innovation_sampler::pareto({1.2, 1.0, 1.0}, 3);
        std::vector<double> x(1000000);
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = G.at1(static_cast<std::int64_t>(k), 0);
        CHECK(std::abs(hill_estimator(x, x.size() / 100) - 1.2) < 0.1);
        // x^alpha P(|xi| > x) -> p + q
        const double t = 50.0;
        const double frac = static_cast<double>(std::count_if(x.begin(), x.end(), [t](double v) { return std::abs(v) > t; })) / x.size();
        CHECK(std::pow(t, 1.2) * frac == doctest::Approx(2.0).epsilon(0.1));
    }

    TEST_CASE("pareto innovations are centred for alpha > 1") {
        const auto G = innovation_sampler::pareto({1.8, 0.2, 0.7}, 5);
        std::vector<double> x(1000000);
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = G.at1(static_cast<std::int64_t>(k), 0);
        // infinite variance: allow a generous band
        CHECK(std::abs(describe(x).mean) < 0.05);
    }

    TEST_CASE("pareto char fn matches draws") {
        const auto G = innovation_sampler::pareto({1.5, 0.3, 0.6}, 8);
        std::vector<double> x(400000);
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = G.at1(static_cast<std::int64_t>(k), 0);
        for (double u : {0.3, 1.0, 2.5}) CHECK(std::abs(empirical_char_fn(x, u) - G.char_fn(u)) < 0.006);
    }

    TEST_CASE("exact mode at alpha = 2 agrees with sample_stable") {
        const stable_params p(2.0, 0.7, 0.0);
        const auto G = innovation_sampler::exact(p, 4);
        std::vector<double> x(100000);
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = G.at1(static_cast<std::int64_t>(k), 0);
        CHECK(ks_two_sample(x, sample_stable(p, 100000, 99)).pvalue > 0.001);
    }
}
