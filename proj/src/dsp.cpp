#include "descan/dsp.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace descan {
namespace {

// FFTW plan creation is not thread-safe; new-array execution is. Plans are
// created with FFTW_UNALIGNED so they accept whatever buffers callers hold.
class PlanCache {
public:
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        const auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> in(n), out(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n),
                                       reinterpret_cast<fftw_complex*>(in.data()),
                                       reinterpret_cast<fftw_complex*>(out.data()),
                                       sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mu_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

std::vector<std::complex<double>> run_dft(const std::vector<std::complex<double>>& in, int sign) {
    std::vector<std::complex<double>> out(in.size());
    fftw_plan p = plan_cache().get(in.size(), sign);
    fftw_execute_dft(p,
                     reinterpret_cast<fftw_complex*>(
                         const_cast<std::complex<double>*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<std::complex<double>> to_complex(std::span<const double> x) {
    std::vector<std::complex<double>> c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[i];
    return c;
}

}  // namespace

double ncc(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw LengthMismatch("ncc: operand lengths differ");
    if (a.empty()) throw EmptyInput("ncc: empty operands");
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) ma += a[i];
    for (std::size_t i = 0; i < n; ++i) mb += b[i];
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0) throw DegenerateInput("ncc: first operand has zero variance");
    if (sbb == 0.0) throw DegenerateInput("ncc: second operand has zero variance");
    return sab / std::sqrt(saa * sbb);
}

double rms(std::span<const double> x) {
    if (x.empty()) throw EmptyInput("rms: empty input");
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc / static_cast<double>(x.size()));
}

std::vector<double> halfwave_rectify(std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    halfwave_rectify_inplace(out);
    return out;
}

void halfwave_rectify_inplace(std::vector<double>& x) {
    for (double& v : x) {
        if (v < 0.0) v = 0.0;
    }
}

Spectrum forward_transform(std::span<const double> x, double sample_rate) {
    if (x.empty()) throw EmptyInput("forward_transform: empty input");
    Spectrum s;
    s.bins = run_dft(to_complex(x), FFTW_FORWARD);
    s.bin_resolution_hz = sample_rate / static_cast<double>(x.size());
    return s;
}

std::vector<double> inverse_transform(const Spectrum& s) {
    if (s.bins.empty()) throw EmptyInput("inverse_transform: empty spectrum");
    auto out = run_dft(s.bins, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(out.size());
    std::vector<double> x(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) x[i] = out[i].real() * scale;
    return x;
}

std::vector<double> magnitude_spectrum_of(std::span<const double> x) {
    if (x.empty()) throw EmptyInput("magnitude_spectrum_of: empty input");
    auto bins = run_dft(to_complex(x), FFTW_FORWARD);
    std::vector<double> mags(bins.size());
    for (std::size_t i = 0; i < bins.size(); ++i) mags[i] = std::abs(bins[i]);
    return mags;
}

NoiseTemplate NoiseTemplate::from_samples(std::vector<double> samples, double sample_rate) {
    if (samples.empty()) throw EmptyInput("NoiseTemplate: empty samples");
    NoiseTemplate tpl;
    tpl.magnitude_spectrum = magnitude_spectrum_of(samples);
    tpl.samples = std::move(samples);
    tpl.sample_rate = sample_rate;
    return tpl;
}

}  // namespace descan
