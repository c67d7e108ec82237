#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "descan/dsp.hpp"
#include "descan/engine.hpp"
#include "descan/synth.hpp"

using namespace descan;

namespace {

constexpr double kRate = 16000.0;

SuppressionParams fast_params() {
    SuppressionParams p = SuppressionParams::defaults(kRate);
    p.l_est = 0.05;  // 800-sample period keeps the tests quick
    p.w = 0.002;
    return p;
}

NoiseModel fast_model(std::uint64_t seed = 1) {
    NoiseModel m;
    m.period_s = 0.05;
    m.jitter_s = 0.0;
    m.background_level = 0.0;
    m.seed = seed;
    return m;
}

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

std::vector<double> run_all(Engine& eng, std::span<const double> input, std::size_t chunk) {
    std::vector<double> out;
    std::size_t i = 0;
    while (i < input.size()) {
        const std::size_t n = std::min(chunk, input.size() - i);
        const auto got = eng.push(input.subspan(i, n));
        out.insert(out.end(), got.begin(), got.end());
        i += n;
    }
    const auto tail = eng.flush();
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

// The engine's warmup/flush path: brick-wall low-pass at the configured
// cutoff, applied to the whole block at once.
std::vector<double> brick_filter(std::span<const double> x, const SuppressionParams& p) {
    if (!p.lowpass_cutoff) return std::vector<double>(x.begin(), x.end());
    auto spec = forward_transform(x, p.s_r);
    const std::size_t n = spec.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double freq = static_cast<double>(std::min(k, n - k)) * p.s_r /
                            static_cast<double>(n);
        if (freq > *p.lowpass_cutoff) spec.bins[k] = 0.0;
    }
    return inverse_transform(spec);
}

double rms_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s / static_cast<double>(x.size()));
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("processing delay follows the window arithmetic") {
    SuppressionParams p = SuppressionParams::defaults(16000.0);
    p.l_est = 0.05;
    p.w = 0.002;
    CHECK(Engine::latency_samples(p) == 1984);

    SuppressionParams doubled = SuppressionParams::defaults(32000.0);
    doubled.l_est = 0.05;
    doubled.w = 0.002;
    CHECK(Engine::latency_samples(doubled) == 3968);

    // Degenerate window widths collapse the delay to one frame.
    SuppressionParams bare = SuppressionParams::defaults(16000.0);
    bare.l_est = 0.0;
    bare.w = 0.0;
    CHECK(Engine::latency_samples(bare) == bare.frame_len);
}

TEST_CASE("input shorter than one window passes through the output filter") {
    auto p = fast_params();
    const auto input = white_noise(p.tau() - 100, 7);

    SUBCASE("with the default cutoff") {
        Engine eng(p);
        auto out = eng.push(input);
        const auto tail = eng.flush();
        out.insert(out.end(), tail.begin(), tail.end());
        const auto expect = brick_filter(input, p);
        REQUIRE(out.size() == input.size());
        for (std::size_t i = 0; i < out.size(); ++i) REQUIRE(out[i] == expect[i]);
    }

    SUBCASE("with the filter disabled") {
        p.lowpass_cutoff.reset();
        Engine eng(p);
        auto out = eng.push(input);
        const auto tail = eng.flush();
        out.insert(out.end(), tail.begin(), tail.end());
        REQUIRE(out.size() == input.size());
        for (std::size_t i = 0; i < out.size(); ++i) REQUIRE(out[i] == input[i]);
    }
}

TEST_CASE("every input sample is emitted exactly once") {
    const auto g = gen_gradient_noise(fast_model(3), 4.0, kRate);
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{100},
                          std::size_t{5000}, std::size_t{31997}, g.size()}) {
        Engine eng(fast_params());
        const auto out =
            run_all(eng, std::span<const double>(g.samples.data(), n), 4096);
        CHECK(out.size() == n);
        CHECK(eng.consumed() == n);
        CHECK(eng.emitted() == n);
    }
}

TEST_CASE("output does not depend on how the input is chunked") {
    auto model = fast_model(11);
    model.jitter_s = 0.0004;
    model.background_level = 0.002;
    const auto g = gen_gradient_noise(model, 4.0, kRate);
    const auto v = gen_test_utterance(1.2, kRate, 12);
    const auto mix = mix_at_snr(v, g, -10.0, 3 * fast_params().tau());

    auto p = fast_params();
    Engine ref_eng(p);
    const auto ref = run_all(ref_eng, mix.y.samples, mix.y.size());

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 4; ++trial) {
        Engine eng(p);
        std::vector<double> out;
        std::size_t i = 0;
        std::uniform_int_distribution<std::size_t> step(1, 3000);
        while (i < mix.y.size()) {
            const std::size_t n = std::min(step(rng), mix.y.size() - i);
            const auto got =
                eng.push(std::span<const double>(mix.y.samples.data() + i, n));
            out.insert(out.end(), got.begin(), got.end());
            i += n;
        }
        const auto tail = eng.flush();
        out.insert(out.end(), tail.begin(), tail.end());
        REQUIRE(out.size() == ref.size());
        for (std::size_t k = 0; k < out.size(); ++k) REQUIRE(out[k] == ref[k]);
        CHECK(eng.events().size() == ref_eng.events().size());
    }

    // Fixed small chunks as well.
    for (std::size_t chunk : {std::size_t{160}, std::size_t{997}}) {
        Engine eng(p);
        const auto out = run_all(eng, mix.y.samples, chunk);
        REQUIRE(out.size() == ref.size());
        for (std::size_t k = 0; k < out.size(); ++k) REQUIRE(out[k] == ref[k]);
    }
}

TEST_CASE("periodic noise locks a template and keeps updating it") {
    const auto g = gen_gradient_noise(fast_model(21), 4.0, kRate);
    auto p = fast_params();
    Engine eng(p);
    std::vector<double> out;
    for (std::size_t i = 0; i < g.size(); i += 4096) {
        const std::size_t n = std::min<std::size_t>(4096, g.size() - i);
        const auto got = eng.push(std::span<const double>(g.samples.data() + i, n));
        out.insert(out.end(), got.begin(), got.end());
    }
    const std::size_t flush_start = out.size();  // tail after here never saw a match
    const auto tail = eng.flush();
    out.insert(out.end(), tail.begin(), tail.end());

    CHECK(eng.phase() == EnginePhase::Locked);
    REQUIRE(eng.noise_template().has_value());
    const auto& tpl = *eng.noise_template();
    CHECK(tpl.length() >= p.min_period());
    CHECK(tpl.length() <= p.max_period());
    CHECK(tpl.update_count > 0);
    CHECK(eng.template_origin() >= 0);

    bool saw_lock = false;
    for (const auto& ev : eng.events()) {
        if (ev.kind == EventKind::PhaseTransition &&
            ev.note.find("-> locked") != std::string::npos) {
            saw_lock = true;
        }
    }
    CHECK(saw_lock);

    // Post-lock output should be much quieter than the raw noise. The drained
    // remainder after the last full window never went through matching, so
    // the comparison stops at the flush boundary.
    const std::size_t half = out.size() / 2;
    REQUIRE(flush_start > half);
    const double in_rms =
        rms_of(std::span<const double>(g.samples.data() + half, flush_start - half));
    const double out_rms =
        rms_of(std::span<const double>(out.data() + half, flush_start - half));
    CHECK(out_rms < 0.1 * in_rms);
}

TEST_CASE("match events carry consistent bookkeeping") {
    const auto g = gen_gradient_noise(fast_model(22), 3.0, kRate);
    auto p = fast_params();
    Engine eng(p);
    (void)run_all(eng, g.samples, 2048);

    REQUIRE(eng.noise_template().has_value());
    const std::int64_t L = static_cast<std::int64_t>(eng.noise_template()->length());
    std::size_t matches = 0;
    for (const auto& ev : eng.events()) {
        if (ev.kind != EventKind::MatchScore) continue;
        ++matches;
        CHECK(ev.lag >= static_cast<std::int64_t>(p.frame_len) + 1);
        CHECK(ev.lag <= static_cast<std::int64_t>(2 * p.frame_len));
        CHECK(ev.segment_len == L);
        CHECK(ev.segment_start >= 0);
        CHECK(ev.segment_start + ev.segment_len <=
              static_cast<std::int64_t>(eng.consumed()));
        CHECK(ev.score >= p.theta_corr);
        CHECK(ev.score <= 1.0);
    }
    CHECK(matches > 20);
}

TEST_CASE("losing the periodic structure is detected and recovered from") {
    const auto g1 = gen_gradient_noise(fast_model(31), 3.0, kRate);
    const auto burst = white_noise(16000, 32);
    const auto g2 = gen_gradient_noise(fast_model(33), 3.0, kRate);
    std::vector<double> input = g1.samples;
    input.insert(input.end(), burst.begin(), burst.end());
    input.insert(input.end(), g2.samples.begin(), g2.samples.end());

    Engine eng(fast_params());
    const auto out = run_all(eng, input, 2048);
    CHECK(out.size() == input.size());

    std::vector<std::string> transitions;
    for (const auto& ev : eng.events()) {
        if (ev.kind == EventKind::PhaseTransition) transitions.push_back(ev.note);
    }
    REQUIRE(transitions.size() >= 3);
    CHECK(transitions[0].find("warmup_estimating -> locked") != std::string::npos);
    bool lost = false, relocked = false;
    for (std::size_t i = 1; i < transitions.size(); ++i) {
        if (transitions[i].find("locked -> match_lost") != std::string::npos) lost = true;
        if (lost && transitions[i].find("match_lost -> locked") != std::string::npos) {
            relocked = true;
        }
    }
    CHECK(lost);
    CHECK(relocked);
    CHECK(eng.phase() == EnginePhase::Locked);
}

TEST_CASE("aperiodic input never locks and passes through filtered") {
    auto p = fast_params();
    p.lowpass_cutoff.reset();
    const auto input = white_noise(8000, 41);
    Engine eng(p);
    std::vector<double> out = eng.push(input);
    const auto tail = eng.flush();
    out.insert(out.end(), tail.begin(), tail.end());

    CHECK(eng.phase() == EnginePhase::WarmupEstimating);
    CHECK_FALSE(eng.noise_template().has_value());
    for (const auto& ev : eng.events()) CHECK(ev.kind != EventKind::MatchScore);
    REQUIRE(out.size() == input.size());
    // Without a lock and without a filter, warmup is a pure delay line.
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == input[i]);
}

TEST_CASE("internal buffering stays bounded while streaming") {
    const auto g = gen_gradient_noise(fast_model(51), 3.0, kRate);
    auto p = fast_params();
    const std::size_t bound = p.tau() + p.max_period();
    Engine eng(p);
    std::size_t i = 0;
    while (i < g.size()) {
        const std::size_t n = std::min<std::size_t>(512, g.size() - i);
        (void)eng.push(std::span<const double>(g.samples.data() + i, n));
        i += n;
        CHECK(eng.consumed() - eng.emitted() <= bound);
    }
    (void)eng.flush();
    CHECK(eng.consumed() == eng.emitted());
}

TEST_CASE("flush is idempotent") {
    const auto g = gen_gradient_noise(fast_model(61), 2.0, kRate);
    Engine eng(fast_params());
    (void)eng.push(std::span<const double>(g.samples.data(), g.size()));
    const auto first = eng.flush();
    const auto second = eng.flush();
    CHECK(second.empty());
    CHECK(eng.consumed() == eng.emitted());
}

TEST_CASE("pushing a chunk with the wrong sample rate throws") {
    Engine eng(fast_params());
    SampleVector chunk;
    chunk.samples.assign(100, 0.0);
    chunk.sample_rate = 8000.0;
    CHECK_THROWS_AS((void)eng.push(chunk), SampleRateMismatch);
}

TEST_CASE("constructor validates parameters") {
    auto p = fast_params();
    p.gamma = 1.5;
    CHECK_THROWS_AS(Engine{p}, ValidationError);
}

}
