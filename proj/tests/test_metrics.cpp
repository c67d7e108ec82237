#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "descan/metrics.hpp"

using namespace descan;

namespace {

constexpr double kTwoPi = 6.283185307179586;

std::vector<double> random_vec(std::size_t n, std::uint64_t seed, double lo = -1.0,
                               double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

std::vector<double> scaled(const std::vector<double>& v, double c) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
    return out;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("perfect template estimate clamps to the floor") {
    const auto g = random_vec(500, 1);
    CHECK(noise_suppression_db(g, g) == -120.0);
}

TEST_CASE("zero estimate scores 0 dB") {
    const auto g = random_vec(500, 2);
    const std::vector<double> zero(500, 0.0);
    CHECK(noise_suppression_db(g, zero) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("half-amplitude estimate scores about -6 dB") {
    const auto g = random_vec(500, 3);
    const auto half = scaled(g, 0.5);
    CHECK(noise_suppression_db(g, half) ==
          doctest::Approx(20.0 * std::log10(0.5)).epsilon(1e-9));
    CHECK(noise_suppression_db(g, half) == doctest::Approx(-6.0205999).epsilon(1e-6));
}

TEST_CASE("suppression falls monotonically as the estimate approaches truth") {
    const auto g = random_vec(400, 4);
    double prev = 1.0e9;
    for (int i = 0; i <= 10; ++i) {
        const double t = static_cast<double>(i) / 10.0;
        const auto g_hat = scaled(g, t);
        const double ns = noise_suppression_db(g, g_hat);
        CHECK(ns < prev);
        prev = ns;
    }
    CHECK(prev == -120.0);  // t = 1 hits the clamp
}

TEST_CASE("snr of equal-norm signals is 0 dB") {
    const auto v = random_vec(300, 5);
    CHECK(snr_db(v, v) == doctest::Approx(0.0));
    const auto g = scaled(v, 0.1);
    CHECK(snr_db(g, v) == doctest::Approx(-20.0).epsilon(1e-9));
    CHECK(snr_db(v, g) == doctest::Approx(20.0).epsilon(1e-9));
    CHECK(snr_db(v, g) == doctest::Approx(-snr_db(g, v)).epsilon(1e-12));
}

TEST_CASE("ideal recovery clamps improvement to the ceiling") {
    const auto g = random_vec(300, 6);
    const auto v = random_vec(300, 7);
    CHECK(isnr_db(g, v, v) == 120.0);
}

TEST_CASE("doing nothing scores the negated input SNR") {
    const auto g = random_vec(300, 8);
    const auto v = scaled(random_vec(300, 9), 0.25);
    const std::vector<double> zero(300, 0.0);
    CHECK(isnr_db(g, v, zero) == doctest::Approx(-snr_db(v, g)).epsilon(1e-12));
}

TEST_CASE("passing the noisy mixture through scores 0 dB") {
    const auto g = random_vec(300, 10);
    const auto v = random_vec(300, 11);
    std::vector<double> v_hat(300);
    for (std::size_t i = 0; i < 300; ++i) v_hat[i] = v[i] + g[i];
    CHECK(isnr_db(g, v, v_hat) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("direct and conventional improvement formulas agree") {
    for (std::uint64_t seed = 20; seed < 25; ++seed) {
        const auto g = random_vec(256, seed);
        const auto v = random_vec(256, seed + 100);
        auto v_hat = random_vec(256, seed + 200, -0.4, 0.4);
        for (std::size_t i = 0; i < 256; ++i) v_hat[i] += v[i] * 0.8;
        CHECK(isnr_db(g, v, v_hat) ==
              doctest::Approx(isnr_conventional_db(g, v, v_hat)).epsilon(1e-9));
    }
}

TEST_CASE("shrinking the residual always beats doing nothing") {
    const auto g = random_vec(256, 30);
    const auto v = random_vec(256, 31);
    const auto v_hat = scaled(v, 0.9);  // residual norm 0.1 * ||v|| < ||v||
    const std::vector<double> zero(256, 0.0);
    CHECK(isnr_db(g, v, v_hat) > isnr_db(g, v, zero));
}

TEST_CASE("metrics ignore a common amplitude scale") {
    const auto g = random_vec(256, 40);
    const auto v = random_vec(256, 41);
    const auto v_hat = scaled(v, 0.7);
    const auto g_hat = scaled(g, 0.3);
    for (double c : {2.0, 3.7}) {
        CHECK(noise_suppression_db(scaled(g, c), scaled(g_hat, c)) ==
              doctest::Approx(noise_suppression_db(g, g_hat)).epsilon(1e-9));
        CHECK(snr_db(scaled(v, c), scaled(g, c)) ==
              doctest::Approx(snr_db(v, g)).epsilon(1e-9));
        CHECK(isnr_db(scaled(g, c), scaled(v, c), scaled(v_hat, c)) ==
              doctest::Approx(isnr_db(g, v, v_hat)).epsilon(1e-9));
    }
}

TEST_CASE("metric error conditions") {
    const auto g = random_vec(10, 50);
    const auto short_g = random_vec(9, 51);
    const std::vector<double> zero(10, 0.0);
    CHECK_THROWS_AS((void)noise_suppression_db(g, short_g), LengthMismatch);
    CHECK_THROWS_AS((void)noise_suppression_db(zero, g), ZeroReference);
    CHECK_THROWS_AS((void)snr_db(zero, g), ZeroOperand);
    CHECK_THROWS_AS((void)snr_db(g, zero), ZeroOperand);
    CHECK_THROWS_AS((void)isnr_db(g, g, short_g), LengthMismatch);
    CHECK_THROWS_AS((void)isnr_db(zero, g, g), ZeroReference);
}

TEST_CASE("speech mask marks exactly the energetic frames") {
    // 1000 samples, 100-sample frames; activity only in samples 300..599.
    std::vector<double> v(1000, 0.0);
    for (std::size_t i = 300; i < 600; ++i) v[i] = 1.0;
    const auto mask = utterance_mask(v, 100, 0.05);
    REQUIRE(mask.size() == 1000);
    for (std::size_t i = 0; i < 1000; ++i) {
        const bool active = i >= 300 && i < 600;
        CHECK(static_cast<bool>(mask[i]) == active);
    }
}

TEST_CASE("mask is frame-constant and covers a partial last frame") {
    std::vector<double> v(250, 0.0);
    for (std::size_t i = 200; i < 250; ++i) v[i] = 0.5;  // short final frame active
    const auto mask = utterance_mask(v, 100, 0.05);
    REQUIRE(mask.size() == 250);
    for (std::size_t i = 0; i < 200; ++i) CHECK(mask[i] == 0);
    for (std::size_t i = 200; i < 250; ++i) CHECK(mask[i] == 1);
}

TEST_CASE("all-quiet reference produces an empty mask, not a throw") {
    const std::vector<double> v(400, 0.0);
    const auto mask = utterance_mask(v, 100, 0.05);
    for (auto m : mask) CHECK(m == 0);
}

TEST_CASE("mask argument validation") {
    const std::vector<double> empty;
    const auto v = random_vec(100, 60);
    CHECK_THROWS_AS((void)utterance_mask(empty, 100, 0.05), EmptyInput);
    CHECK_THROWS_AS((void)utterance_mask(v, 0, 0.05), OutOfRange);
    CHECK_THROWS_AS((void)utterance_mask(v, 100, 0.0), OutOfRange);
    CHECK_THROWS_AS((void)utterance_mask(v, 100, 1.0), OutOfRange);
}

TEST_CASE("spectral estimate peaks at a pure tone's frequency") {
    const double rate = 16000.0;
    const std::size_t n = 32000;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::sin(kTwoPi * 1000.0 * static_cast<double>(i) / rate);
    }
    const auto psd = welch_psd(x, rate);
    REQUIRE(!psd.empty());
    std::size_t peak = 0;
    for (std::size_t k = 1; k < psd.size(); ++k) {
        if (psd[k].power_density > psd[peak].power_density) peak = k;
    }
    // 100 ms window gives 10 Hz bins; the peak must land on the tone.
    CHECK(std::abs(psd[peak].frequency_hz - 1000.0) <= 10.0);
}

TEST_CASE("white noise comes out flat and integrates to its variance") {
    const double rate = 8000.0;
    std::mt19937_64 rng(777);
    std::normal_distribution<double> dist(0.0, 0.25);
    std::vector<double> x(static_cast<std::size_t>(rate) * 12);
    double var = 0.0;
    for (auto& s : x) {
        s = dist(rng);
        var += s * s;
    }
    var /= static_cast<double>(x.size());

    const auto psd = welch_psd(x, rate);
    REQUIRE(psd.size() > 10);

    double integral = 0.0;
    const double df = psd[1].frequency_hz - psd[0].frequency_hz;
    for (const auto& p : psd) integral += p.power_density * df;
    CHECK(integral == doctest::Approx(var).epsilon(0.05));

    // Flatness: every interior bin within 3 dB of the band mean.
    double mean = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 2; k + 2 < psd.size(); ++k) {
        mean += psd[k].power_density;
        ++count;
    }
    mean /= static_cast<double>(count);
    for (std::size_t k = 2; k + 2 < psd.size(); ++k) {
        const double ratio_db = 10.0 * std::log10(psd[k].power_density / mean);
        CHECK(std::abs(ratio_db) < 3.0);
    }
}

TEST_CASE("spectral estimate argument validation") {
    const auto x = random_vec(100, 70);
    CHECK_THROWS_AS((void)welch_psd(x, 16000.0), TooShort);  // 100 samples < 100 ms window
    CHECK_THROWS_AS((void)welch_psd(x, 0.0), OutOfRange);
    CHECK_THROWS_AS((void)welch_psd(x, 16000.0, 0.1, 1.0), OutOfRange);
    CHECK_THROWS_AS((void)welch_psd(x, 16000.0, 0.1, -0.1), OutOfRange);
    CHECK_THROWS_AS((void)welch_psd(x, 16000.0, 0.0), OutOfRange);
}

}
