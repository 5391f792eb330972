#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include "fbmc/channel.hpp"

using fbmc::cplx;

TEST_CASE("power delay profile: normalization and validation") {
    const auto etu = fbmc::PowerDelayProfile::etu();
    REQUIRE(etu.delays_s.size() == 9);
    const auto p = etu.linear_powers();
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(etu.delays_s.back() == doctest::Approx(5e-6));

    CHECK_THROWS_AS(fbmc::PowerDelayProfile({0.0, 1e-6, 1e-6}, {0, 0, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fbmc::PowerDelayProfile({1e-6}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(fbmc::PowerDelayProfile({0.0}, {0, 0}), std::invalid_argument);
}

TEST_CASE("awgn: variance, determinism, zero-noise passthrough") {
    std::vector<cplx> x(200000, cplx{0.0, 0.0});
    const double sigma2 = 0.37;
    const auto y = fbmc::awgn(x, sigma2, 99);
    double p = 0.0;
    cplx mean{};
    for (const auto& v : y) {
        p += std::norm(v);
        mean += v;
    }
    p /= static_cast<double>(y.size());
    mean /= static_cast<double>(y.size());
    CHECK(p == doctest::Approx(sigma2).epsilon(0.02));
    CHECK(std::abs(mean) < 0.01);

    const auto y2 = fbmc::awgn(x, sigma2, 99);
    CHECK(y == y2);  // seeded determinism
    const auto y3 = fbmc::awgn(x, 0.0, 99);
    CHECK(y3 == x);
}

TEST_CASE("rayleigh taps: per-tap power matches the profile") {
    const auto profile = fbmc::PowerDelayProfile::etu();
    const auto powers = profile.linear_powers();
    // Long realization so the time average approximates the ensemble power.
    const auto ch = fbmc::make_channel(profile, 500.0, 1e5, 200000, 4);
    for (size_t t = 0; t < powers.size(); ++t) {
        double p = 0.0;
        for (const auto& g : ch.tap_gains[t]) p += std::norm(g);
        p /= static_cast<double>(ch.tap_gains[t].size());
        CHECK(p == doctest::Approx(powers[t]).epsilon(0.15));
    }
}

TEST_CASE("rayleigh taps: autocorrelation tracks J0(2 pi fd tau)") {
    const fbmc::PowerDelayProfile flat({0.0}, {0.0});
    const double fd = 500.0, rate = 1e5;
    const size_t n = 400000;
    const auto ch = fbmc::make_channel(flat, fd, rate, n, 12);
    const auto& g = ch.tap_gains[0];
    double p0 = 0.0;
    for (const auto& v : g) p0 += std::norm(v);
    for (const int lag : {20, 60, 120, 250}) {
        cplx acc{};
        for (size_t k = 0; k + lag < n; ++k) acc += g[k] * std::conj(g[k + lag]);
        const double rho = acc.real() / p0;
        const double target = std::cyl_bessel_j(0.0, 2.0 * fbmc::pi * fd * lag / rate);
        CHECK(rho == doctest::Approx(target).epsilon(0.05).scale(0.5));
    }
}

TEST_CASE("zero doppler yields time-constant taps") {
    const auto ch = fbmc::make_channel(fbmc::PowerDelayProfile::etu(), 0.0, 3.84e6,
                                       5000, 77);
    for (const auto& tap : ch.tap_gains)
        for (const auto& v : tap) CHECK(std::abs(v - tap.front()) < 1e-12);
}

TEST_CASE("apply_channel equals the brute-force tapped delay line exactly") {
    std::mt19937_64 rng(31);
    std::vector<cplx> x(500);
    for (auto& v : x)
        v = cplx(static_cast<double>(rng() % 2000) / 1000 - 1.0,
                 static_cast<double>(rng() % 2000) / 1000 - 1.0);
    const auto ch = fbmc::make_channel(fbmc::PowerDelayProfile::etu(), 92.6, 3.84e6,
                                       600, 8);
    const auto y = fbmc::apply_channel(x, ch);

    int max_delay = 0;
    for (int d : ch.tap_delays_samples) max_delay = std::max(max_delay, d);
    std::vector<cplx> ref(x.size() + max_delay, cplx{});
    for (size_t t = 0; t < ch.tap_gains.size(); ++t) {
        const int d = ch.tap_delays_samples[t];
        for (size_t k = 0; k < x.size(); ++k)
            ref[k + d] += ch.tap_gains[t][std::min(k + d, ch.num_samples() - 1)] * x[k];
    }
    REQUIRE(y.size() == ref.size());
    for (size_t i = 0; i < y.size(); ++i) CHECK(y[i] == ref[i]);  // bit-exact
}

TEST_CASE("apply_channel error paths") {
    const auto ch = fbmc::make_channel(fbmc::PowerDelayProfile::etu(), 0.0, 3.84e6,
                                       100, 8);
    std::vector<cplx> long_stream(500);
    CHECK_THROWS_AS((void)fbmc::apply_channel(long_stream, ch), std::invalid_argument);
    std::vector<cplx> shorter_than_delay(10);
    CHECK_THROWS_AS((void)fbmc::apply_channel(shorter_than_delay, ch),
                    std::invalid_argument);
}

TEST_CASE("true_freq_response: single-tap oracle") {
    const fbmc::PowerDelayProfile single({0.0}, {0.0});
    const auto ch = fbmc::make_channel(single, 0.0, 3.84e6, 100, 5);
    const cplx g = ch.tap_gains[0][0];
    for (int m : {0, 3, 17})
        CHECK(std::abs(fbmc::true_freq_response(ch, 0, m, 64) - g) < 1e-12);

    // two taps: explicit phase ramp across subcarriers
    const fbmc::PowerDelayProfile two({0.0, 4.0 / 3.84e6}, {0.0, 0.0});
    const auto ch2 = fbmc::make_channel(two, 0.0, 3.84e6, 100, 6);
    const cplx expected =
        ch2.tap_gains[0][0] +
        ch2.tap_gains[1][0] * std::exp(cplx(0, 2.0 * fbmc::pi * 5 * 4 / 64.0));
    CHECK(std::abs(fbmc::true_freq_response(ch2, 0, 5, 64) - expected) < 1e-12);
}
