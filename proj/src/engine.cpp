#include "descan/engine.hpp"

#include <algorithm>
#include <utility>

#include "descan/estimator.hpp"
#include "descan/matcher.hpp"

namespace descan {

const char* to_string(EnginePhase phase) {
    switch (phase) {
        case EnginePhase::WarmupEstimating: return "warmup_estimating";
        case EnginePhase::Locked: return "locked";
        case EnginePhase::MatchLost: return "match_lost";
    }
    return "warmup_estimating";
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::PhaseTransition: return "phase_transition";
        case EventKind::MatchScore: return "match_score";
        case EventKind::TemplateUpdate: return "template_update";
        case EventKind::MatchLostEvent: return "match_lost";
    }
    return "phase_transition";
}

Engine::Engine(SuppressionParams params) : params_(params) {
    params_.validate();
    tau_ = params_.tau();
    // History kept behind the cursor. Sized so a perfectly aligned next
    // occurrence lands mid-range in the matcher's [N+1, 2N] lag window, and
    // small enough that even the smallest admissible lag still consumes at
    // least one sample per matched window.
    const std::size_t half =
        std::max<std::size_t>(1, std::min(params_.frame_len, params_.min_period()) / 2);
    lookback_ = params_.frame_len + half;
    ring_.assign(lookback_, 0.0);
    cursor_ = lookback_;
    ring_base_ = -static_cast<std::int64_t>(lookback_);
}

std::size_t Engine::latency_samples(const SuppressionParams& params) { return params.tau(); }

std::span<const double> Engine::pending_view(std::size_t n) const {
    return {ring_.data() + cursor_, n};
}

std::span<const double> Engine::match_window() const {
    return {ring_.data() + cursor_ - lookback_, lookback_ + tau_};
}

SampleVector Engine::push(const SampleVector& chunk) {
    if (chunk.sample_rate != params_.s_r)
        throw SampleRateMismatch("push: chunk sample rate differs from configured rate");
    return {push(std::span<const double>(chunk.samples)), params_.s_r};
}

std::vector<double> Engine::push(std::span<const double> chunk) {
    ring_.insert(ring_.end(), chunk.begin(), chunk.end());
    consumed_ += chunk.size();
    std::vector<double> out;
    drain(out);
    return out;
}

std::vector<double> Engine::flush() {
    std::vector<double> out;
    const std::size_t n = pending();
    if (n > 0) {
        emit_filtered(pending_view(n), out);
        consume(n);
    }
    if (cursor_ > lookback_) {
        const std::size_t drop = cursor_ - lookback_;
        ring_.erase(ring_.begin(), ring_.begin() + static_cast<std::ptrdiff_t>(drop));
        ring_base_ += static_cast<std::int64_t>(drop);
        cursor_ = lookback_;
    }
    return out;
}

void Engine::drain(std::vector<double>& out) {
    while (pending() >= tau_) {
        switch (phase_) {
            case EnginePhase::WarmupEstimating: step_warmup(out, false); break;
            case EnginePhase::Locked: step_locked(out); break;
            case EnginePhase::MatchLost: step_warmup(out, true); break;
        }
    }
    // Trim everything older than the lookback history.
    if (cursor_ > lookback_) {
        const std::size_t drop = cursor_ - lookback_;
        ring_.erase(ring_.begin(), ring_.begin() + static_cast<std::ptrdiff_t>(drop));
        ring_base_ += static_cast<std::int64_t>(drop);
        cursor_ = lookback_;
    }
}

void Engine::step_warmup(std::vector<double>& out, bool from_match_lost) {
    EstimateResult res = estimate_template(pending_view(tau_), params_);
    if (!res.found()) {
        // Nothing periodic enough here; release half a buffer and retry once
        // more audio arrives.
        const std::size_t n = std::max<std::size_t>(1, tau_ / 2);
        emit_filtered(pending_view(n), out);
        warmup_emitted_ += n;
        consume(n);
        return;
    }

    const std::int64_t origin = abs_cursor() + static_cast<std::int64_t>(res.best.offset);
    // Pass everything through the end of the found occurrence, so the next
    // occurrence starts one period past the cursor and lands mid lag range.
    const std::size_t release = res.best.offset + res.best.period;
    emit_filtered(pending_view(release), out);
    warmup_emitted_ += release;
    consume(release);

    adopt_template(std::move(*res.tpl), origin);
    log(EventKind::PhaseTransition, res.best.score, -1, origin,
        static_cast<std::int64_t>(res.best.period),
        std::string(from_match_lost ? "match_lost" : "warmup_estimating") + " -> locked");
    phase_ = EnginePhase::Locked;
}

void Engine::step_locked(std::vector<double>& out) {
    const std::span<const double> window = match_window();
    const MatchResult mr = match_template(window, *tpl_, params_);
    const std::size_t L = tpl_->length();

    if (!mr.matched) {
        log(EventKind::MatchLostEvent, mr.score, static_cast<std::int64_t>(mr.lag), abs_cursor(),
            static_cast<std::int64_t>(tau_), "peak below theta_corr");
        log(EventKind::PhaseTransition, mr.score, -1, abs_cursor(), 0, "locked -> match_lost");
        emit_filtered(pending_view(tau_), out);
        consume(tau_);
        phase_ = EnginePhase::MatchLost;
        return;
    }

    // Segment position relative to the cursor; negative when the matched
    // occurrence overlaps samples already emitted (late-arriving alignment).
    const std::int64_t s =
        static_cast<std::int64_t>(mr.lag) - static_cast<std::int64_t>(lookback_);
    const std::int64_t seg_abs = abs_cursor() + s;

    const std::vector<double> x_b = extract_matched_segment(window, mr.lag, L);
    const std::vector<double> v_hat =
        subtract_and_reconstruct(x_b, *tpl_, wfun_, dmask_, params_.alpha);
    log(EventKind::MatchScore, mr.score, static_cast<std::int64_t>(mr.lag), seg_abs,
        static_cast<std::int64_t>(L), "");

    NoiseTemplate updated =
        maybe_update_template(*tpl_, x_b, v_hat, params_.gamma, params_.theta_rms);
    if (updated.update_count != tpl_->update_count) {
        log(EventKind::TemplateUpdate, rms(v_hat), -1, seg_abs, static_cast<std::int64_t>(L), "");
    }
    *tpl_ = std::move(updated);

    if (s > 0) emit_filtered(pending_view(static_cast<std::size_t>(s)), out);
    const std::size_t skip = s < 0 ? static_cast<std::size_t>(-s) : 0;
    out.insert(out.end(), v_hat.begin() + static_cast<std::ptrdiff_t>(skip), v_hat.end());
    emitted_ += v_hat.size() - skip;
    consume(static_cast<std::size_t>(s + static_cast<std::int64_t>(L)));
}

void Engine::adopt_template(NoiseTemplate tpl, std::int64_t origin) {
    const std::size_t L = tpl.length();
    wfun_ = make_weighting(params_.weighting, L, params_.s_r);
    dmask_ = params_.lowpass_cutoff ? make_lowpass(*params_.lowpass_cutoff, L, params_.s_r)
                                    : make_allpass(L, params_.s_r);
    tpl_ = std::move(tpl);
    tpl_origin_ = origin;
}

void Engine::emit_filtered(std::span<const double> raw, std::vector<double>& out) {
    if (raw.empty()) return;
    if (!params_.lowpass_cutoff) {
        out.insert(out.end(), raw.begin(), raw.end());
        emitted_ += raw.size();
        return;
    }
    const std::size_t n = raw.size();
    Spectrum spec = forward_transform(raw, params_.s_r);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t m = std::min(k, n - k);
        const double f = static_cast<double>(m) * params_.s_r / static_cast<double>(n);
        if (f > *params_.lowpass_cutoff) spec.bins[k] = 0.0;
    }
    const std::vector<double> filtered = inverse_transform(spec);
    out.insert(out.end(), filtered.begin(), filtered.end());
    emitted_ += n;
}

void Engine::consume(std::size_t n) { cursor_ += n; }

void Engine::log(EventKind kind, double score, std::int64_t lag, std::int64_t seg_start,
                 std::int64_t seg_len, std::string note) {
    EngineEvent ev;
    ev.sample_index = seg_start;
    ev.kind = kind;
    ev.score = score;
    ev.lag = lag;
    ev.segment_start = seg_start;
    ev.segment_len = seg_len;
    ev.note = std::move(note);
    events_.push_back(std::move(ev));
}

}  // namespace descan
