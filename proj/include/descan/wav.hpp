// Mono WAV file I/O (RIFF PCM16 and IEEE float32).
#pragma once

#include <cstddef>
#include <string>

#include "descan/types.hpp"

namespace descan {

enum class WavEncoding { Pcm16, Float32 };

/// Reads a mono RIFF/WAVE file. PCM16 samples map to s/32768.
/// Throws CorruptHeader, UnsupportedFormat, MultiChannel.
SampleVector read_wav(const std::string& path);

/// Writes a mono WAV file; amplitudes are clipped to [-1, 1] and the number
/// of clipped samples is returned so callers can warn. PCM16 writes
/// round(x * 32767).
std::size_t write_wav(const std::string& path, const SampleVector& x,
                      WavEncoding encoding = WavEncoding::Pcm16);

}  // namespace descan
