// Streaming orchestration of the three suppression stages.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "descan/dsp.hpp"
#include "descan/suppressor.hpp"
#include "descan/types.hpp"

namespace descan {

enum class EnginePhase { WarmupEstimating, Locked, MatchLost };

enum class EventKind { PhaseTransition, MatchScore, TemplateUpdate, MatchLostEvent };

/// One entry of the engine's event log. sample_index is the absolute input
/// sample position the event refers to. score/lag/segment fields are filled
/// where meaningful (match and match-lost events), note carries free-form
/// detail such as the phase transition description.
struct EngineEvent {
    std::int64_t sample_index = 0;
    EventKind kind = EventKind::PhaseTransition;
    double score = 0.0;
    std::int64_t lag = -1;
    std::int64_t segment_start = -1;  // absolute input index of the matched segment
    std::int64_t segment_len = 0;
    std::string note;
};

const char* to_string(EnginePhase phase);
const char* to_string(EventKind kind);

/// Single-channel streaming noise suppressor.
///
/// Input arrives through push() in chunks of any size; output leaves the same
/// calls once enough samples are buffered. Every input sample is emitted
/// exactly once (possibly transformed), so after flush() the total output
/// length equals the total input length. The output stream is bit-identical
/// for a given input regardless of how it was chunked.
///
/// Lifecycle: the engine starts in WarmupEstimating, scanning for a periodic
/// noise stretch. Warmup samples pass through the output low-pass filter
/// unsuppressed. Once a template locks, each pending window is matched
/// against the template, the matched segment is suppressed, and the template
/// conditionally updated. A failed match drops the engine to MatchLost, which
/// re-runs estimation until a new template locks.
///
/// Ownership: one logical thread drives push/flush at a time; the object may
/// move between threads between calls.
class Engine {
public:
    explicit Engine(SuppressionParams params);  // validates params

    /// Feed samples; returns whatever output became ready.
    /// Throws SampleRateMismatch when chunk.sample_rate != params.s_r.
    SampleVector push(const SampleVector& chunk);
    std::vector<double> push(std::span<const double> chunk);

    /// Drain everything still buffered through the low-pass filter (no
    /// further matching). Afterward emitted() == consumed(). Idempotent.
    std::vector<double> flush();

    EnginePhase phase() const { return phase_; }
    std::uint64_t consumed() const { return consumed_; }
    std::uint64_t emitted() const { return emitted_; }
    const std::vector<EngineEvent>& events() const { return events_; }
    const SuppressionParams& params() const { return params_; }

    /// Current template, absent before first lock.
    const std::optional<NoiseTemplate>& noise_template() const { return tpl_; }

    /// Absolute input index the current template was estimated from.
    std::int64_t template_origin() const { return tpl_origin_; }

    /// Processing delay in samples: frame_len + round(2*(l_est+w)*s_r).
    static std::size_t latency_samples(const SuppressionParams& params);

private:
    void drain(std::vector<double>& out);
    void step_warmup(std::vector<double>& out, bool from_match_lost);
    void step_locked(std::vector<double>& out);
    void adopt_template(NoiseTemplate tpl, std::int64_t origin);
    void emit_filtered(std::span<const double> raw, std::vector<double>& out);
    void consume(std::size_t n);
    void log(EventKind kind, double score, std::int64_t lag, std::int64_t seg_start,
             std::int64_t seg_len, std::string note);

    std::size_t pending() const { return ring_.size() - cursor_; }
    std::int64_t abs_cursor() const { return ring_base_ + static_cast<std::int64_t>(cursor_); }
    std::span<const double> pending_view(std::size_t n) const;
    std::span<const double> match_window() const;

    SuppressionParams params_;
    std::size_t tau_;
    std::size_t lookback_;  // raw history kept behind the cursor for lag alignment

    // ring_[0, cursor_) is already emitted but retained as raw match history;
    // ring_[cursor_, end) is pending. ring_base_ maps ring_[0] to an absolute
    // input index (negative at startup: the ring is pre-padded with zeros).
    std::vector<double> ring_;
    std::size_t cursor_ = 0;
    std::int64_t ring_base_ = 0;

    EnginePhase phase_ = EnginePhase::WarmupEstimating;
    std::optional<NoiseTemplate> tpl_;
    std::int64_t tpl_origin_ = -1;
    WeightingFunction wfun_;
    DigitalFilterMask dmask_;

    std::uint64_t consumed_ = 0;
    std::uint64_t emitted_ = 0;
    std::uint64_t warmup_emitted_ = 0;
    std::vector<EngineEvent> events_;
};

}  // namespace descan
