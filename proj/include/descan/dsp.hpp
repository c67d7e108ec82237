// Pure numerical primitives: correlation, RMS, rectification, DFT pair.
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "descan/types.hpp"

namespace descan {

/// Zero-mean, unit-norm normalized cross-correlation coefficient in [-1, 1].
/// Throws LengthMismatch for unequal lengths, EmptyInput for empty operands,
/// DegenerateInput when either operand has zero variance.
double ncc(std::span<const double> a, std::span<const double> b);

/// Root mean square amplitude. Throws EmptyInput.
double rms(std::span<const double> x);

/// Elementwise max(value, 0).
std::vector<double> halfwave_rectify(std::span<const double> x);
void halfwave_rectify_inplace(std::vector<double>& x);

/// Complex coefficients of a length-L forward DFT, no zero padding.
struct Spectrum {
    std::vector<std::complex<double>> bins;
    double bin_resolution_hz = 0.0;

    std::size_t size() const { return bins.size(); }
};

/// Forward DFT at the vector's native length. Throws EmptyInput.
Spectrum forward_transform(std::span<const double> x, double sample_rate);

/// Inverse DFT, real part only. Throws EmptyInput on an empty spectrum.
std::vector<double> inverse_transform(const Spectrum& s);

/// Magnitude of the forward transform, one value per bin.
std::vector<double> magnitude_spectrum_of(std::span<const double> x);

/// Current noise template estimate with its cached magnitude spectrum.
/// Length is fixed at creation; every update rebuilds the spectrum.
struct NoiseTemplate {
    std::vector<double> samples;
    double sample_rate = 16000.0;
    std::vector<double> magnitude_spectrum;
    std::uint64_t update_count = 0;

    static NoiseTemplate from_samples(std::vector<double> samples, double sample_rate);
    std::size_t length() const { return samples.size(); }
};

}  // namespace descan
