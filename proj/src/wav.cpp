#include "descan/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace descan {
namespace {

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(static_cast<std::uint16_t>(p[0]) |
                                      (static_cast<std::uint16_t>(p[1]) << 8));
}

void put_u32(std::ofstream& f, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                                static_cast<unsigned char>((v >> 8) & 0xff),
                                static_cast<unsigned char>((v >> 16) & 0xff),
                                static_cast<unsigned char>((v >> 24) & 0xff)};
    f.write(reinterpret_cast<const char*>(b), 4);
}

void put_u16(std::ofstream& f, std::uint16_t v) {
    const unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                                static_cast<unsigned char>((v >> 8) & 0xff)};
    f.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace

SampleVector read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("read_wav: cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw CorruptHeader("read_wav: not a RIFF/WAVE file: " + path);

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const unsigned char* data = nullptr;
    std::size_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t size = read_u32(bytes.data() + pos + 4);
        pos += 8;
        if (pos + size > bytes.size()) throw CorruptHeader("read_wav: truncated chunk in " + path);
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (size < 16) throw CorruptHeader("read_wav: fmt chunk too small in " + path);
            format = read_u16(bytes.data() + pos);
            channels = read_u16(bytes.data() + pos + 2);
            rate = read_u32(bytes.data() + pos + 4);
            bits = read_u16(bytes.data() + pos + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = bytes.data() + pos;
            data_size = size;
        }
        pos += size + (size % 2);  // chunks are word-aligned
    }
    if (!have_fmt || data == nullptr)
        throw CorruptHeader("read_wav: missing fmt or data chunk in " + path);
    if (channels != 1) throw MultiChannel("read_wav: expected mono, got " +
                                          std::to_string(channels) + " channels: " + path);

    SampleVector out;
    out.sample_rate = static_cast<double>(rate);
    if (format == 1 && bits == 16) {
        const std::size_t n = data_size / 2;
        out.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::int16_t s =
                static_cast<std::int16_t>(read_u16(data + 2 * i));
            out.samples[i] = static_cast<double>(s) / 32768.0;
        }
    } else if (format == 3 && bits == 32) {
        const std::size_t n = data_size / 4;
        out.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            float v;
            std::memcpy(&v, data + 4 * i, 4);
            out.samples[i] = static_cast<double>(v);
        }
    } else {
        throw UnsupportedFormat("read_wav: only PCM16 and float32 supported (format=" +
                                std::to_string(format) + ", bits=" + std::to_string(bits) +
                                "): " + path);
    }
    return out;
}

std::size_t write_wav(const std::string& path, const SampleVector& x, WavEncoding encoding) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("write_wav: cannot open " + path);

    const std::uint16_t bytes_per = encoding == WavEncoding::Pcm16 ? 2 : 4;
    const std::uint32_t rate = static_cast<std::uint32_t>(std::llround(x.sample_rate));
    const std::uint32_t data_size = static_cast<std::uint32_t>(x.size() * bytes_per);

    f.write("RIFF", 4);
    put_u32(f, 36 + data_size);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    put_u32(f, 16);
    put_u16(f, encoding == WavEncoding::Pcm16 ? 1 : 3);
    put_u16(f, 1);  // mono
    put_u32(f, rate);
    put_u32(f, rate * bytes_per);
    put_u16(f, bytes_per);
    put_u16(f, encoding == WavEncoding::Pcm16 ? 16 : 32);
    f.write("data", 4);
    put_u32(f, data_size);

    std::size_t clipped = 0;
    for (double v : x.samples) {
        if (v < -1.0 || v > 1.0) {
            ++clipped;
            v = v < -1.0 ? -1.0 : 1.0;
        }
        if (encoding == WavEncoding::Pcm16) {
            put_u16(f, static_cast<std::uint16_t>(
                           static_cast<std::int16_t>(std::llround(v * 32767.0))));
        } else {
            const float fv = static_cast<float>(v);
            std::uint32_t u;
            std::memcpy(&u, &fv, 4);
            put_u32(f, u);
        }
    }
    if (!f) throw Error("write_wav: write failed: " + path);
    return clipped;
}

}  // namespace descan
