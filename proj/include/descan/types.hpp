// Shared domain types and error set for the descan library.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace descan {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LengthMismatch : public Error { public: using Error::Error; };
class DegenerateInput : public Error { public: using Error::Error; };
class EmptyInput : public Error { public: using Error::Error; };
class BufferTooShort : public Error { public: using Error::Error; };
class OutOfRange : public Error { public: using Error::Error; };
class SampleRateMismatch : public Error { public: using Error::Error; };
class InvalidCutoff : public Error { public: using Error::Error; };
class InvalidModel : public Error { public: using Error::Error; };
class ZeroReference : public Error { public: using Error::Error; };
class ZeroOperand : public Error { public: using Error::Error; };
class ZeroSignal : public Error { public: using Error::Error; };
class TooShort : public Error { public: using Error::Error; };
class UnsupportedFormat : public Error { public: using Error::Error; };
class CorruptHeader : public Error { public: using Error::Error; };
class MultiChannel : public Error { public: using Error::Error; };
class ParseError : public Error { public: using Error::Error; };
class ValidationError : public Error { public: using Error::Error; };

/// Mono sample sequence, normalized floating amplitude (nominal range [-1, 1]).
struct SampleVector {
    std::vector<double> samples;
    double sample_rate = 16000.0;

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate; }
};

enum class Weighting { Zero, LinearFreq };

/// All algorithm tunables in one validated record. Durations are in seconds,
/// frequencies in Hz, thresholds dimensionless.
struct SuppressionParams {
    double l_est = 0.1;           // expected noise period (volume time / slice count)
    double w = 0.002;             // half-width of the period search range
    double s_r = 16000.0;         // sampling rate
    std::size_t frame_len = 320;  // N; round(0.02 * s_r) unless overridden
    double theta_xcorr = 0.9;     // template estimation acceptance threshold
    double theta_corr = 0.8;      // template match acceptance threshold
    double alpha = 1.0;           // noise spectrum scaling
    double theta_rms = 0.02;      // template update guard level
    double gamma = 0.9;           // template update blend
    Weighting weighting = Weighting::Zero;
    std::optional<double> lowpass_cutoff = 5000.0;  // nullopt disables the output filter

    /// Default record for a sampling rate, with frame_len = round(0.02 * s_r).
    static SuppressionParams defaults(double sample_rate);

    /// Throws ValidationError naming the violated invariant.
    void validate() const;

    /// Processing buffer length: frame_len + round(2 * (l_est + w) * s_r).
    std::size_t tau() const;

    /// Candidate template length bounds, round((l_est -/+ w) * s_r).
    std::size_t min_period() const;
    std::size_t max_period() const;
};

inline std::size_t SuppressionParams::tau() const {
    return frame_len + static_cast<std::size_t>(std::llround(2.0 * (l_est + w) * s_r));
}

inline std::size_t SuppressionParams::min_period() const {
    return static_cast<std::size_t>(std::llround((l_est - w) * s_r));
}

inline std::size_t SuppressionParams::max_period() const {
    return static_cast<std::size_t>(std::llround((l_est + w) * s_r));
}

const char* to_string(Weighting kind);
Weighting weighting_from_string(const std::string& name);

}  // namespace descan
