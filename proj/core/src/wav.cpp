#include "meteraug/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace meteraug {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

std::uint16_t read_u16le(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void append_u16le(std::string& out, std::uint16_t value) {
    out.push_back(static_cast<char>(value & 0xff));
    out.push_back(static_cast<char>((value >> 8) & 0xff));
}

void append_u32le(std::string& out, std::uint32_t value) {
    out.push_back(static_cast<char>(value & 0xff));
    out.push_back(static_cast<char>((value >> 8) & 0xff));
    out.push_back(static_cast<char>((value >> 16) & 0xff));
    out.push_back(static_cast<char>((value >> 24) & 0xff));
}

struct FmtChunk {
    std::uint16_t format_tag = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits_per_sample = 0;
};

FmtChunk parse_fmt(const unsigned char* p, std::size_t size, const std::string& path) {
    if (size < 16) {
        throw std::runtime_error(path + ": fmt chunk too small");
    }
    FmtChunk fmt;
    fmt.format_tag = read_u16le(p);
    fmt.channels = read_u16le(p + 2);
    fmt.sample_rate = read_u32le(p + 4);
    fmt.bits_per_sample = read_u16le(p + 14);
    return fmt;
}

WavFormat checked_format(const FmtChunk& fmt, const std::string& path) {
    if (fmt.channels < 1) {
        throw std::runtime_error(path + ": no channels");
    }
    if (fmt.sample_rate == 0) {
        throw std::runtime_error(path + ": zero sample rate");
    }
    if (fmt.format_tag == kFormatPcm && fmt.bits_per_sample == 16) {
        return WavFormat::pcm16;
    }
    if (fmt.format_tag == kFormatFloat && fmt.bits_per_sample == 32) {
        return WavFormat::float32;
    }
    throw std::runtime_error(path + ": unsupported encoding (format tag " +
                             std::to_string(fmt.format_tag) + ", " +
                             std::to_string(fmt.bits_per_sample) + " bits); expected 16-bit PCM " +
                             "or 32-bit float");
}

std::vector<unsigned char> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    in.seekg(0, std::ios::end);
    std::streamoff size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<unsigned char> data(static_cast<std::size_t>(std::max<std::streamoff>(size, 0)));
    if (!data.empty()) {
        in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    }
    if (!in) {
        throw std::runtime_error("read failed: " + path);
    }
    return data;
}

float decode_sample(const unsigned char* p, WavFormat format) {
    if (format == WavFormat::pcm16) {
        std::int16_t raw = static_cast<std::int16_t>(read_u16le(p));
        return static_cast<float>(raw) / 32768.0f;
    }
    return std::bit_cast<float>(read_u32le(p));
}

}  // namespace

WavInfo wav_info(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    unsigned char header[12];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || std::memcmp(header, "RIFF", 4) != 0 || std::memcmp(header + 8, "WAVE", 4) != 0) {
        throw std::runtime_error(path + ": missing RIFF/WAVE header");
    }

    bool have_fmt = false;
    FmtChunk fmt;
    bool have_data = false;
    std::uint32_t data_size = 0;

    unsigned char chunk_header[8];
    while (in.read(reinterpret_cast<char*>(chunk_header), sizeof(chunk_header))) {
        std::uint32_t chunk_size = read_u32le(chunk_header + 4);
        std::uint32_t padded = chunk_size + (chunk_size & 1);
        if (std::memcmp(chunk_header, "fmt ", 4) == 0) {
            std::vector<unsigned char> body(std::min<std::uint32_t>(chunk_size, 64));
            in.read(reinterpret_cast<char*>(body.data()),
                    static_cast<std::streamsize>(body.size()));
            if (!in) {
                throw std::runtime_error(path + ": truncated fmt chunk");
            }
            fmt = parse_fmt(body.data(), body.size(), path);
            have_fmt = true;
            in.seekg(padded - body.size(), std::ios::cur);
        } else if (std::memcmp(chunk_header, "data", 4) == 0) {
            have_data = true;
            data_size = chunk_size;
            break;
        } else {
            in.seekg(padded, std::ios::cur);
        }
    }
    if (!have_fmt || !have_data) {
        throw std::runtime_error(path + ": missing fmt or data chunk");
    }

    WavInfo info;
    info.format = checked_format(fmt, path);
    info.sample_rate = static_cast<int>(fmt.sample_rate);
    info.channels = fmt.channels;
    std::size_t frame_bytes =
        static_cast<std::size_t>(fmt.channels) * (fmt.bits_per_sample / 8);
    info.frames = data_size / frame_bytes;
    return info;
}

AudioBuffer read_wav(const std::string& path) {
    std::vector<unsigned char> raw = read_binary_file(path);
    if (raw.size() < 12 || std::memcmp(raw.data(), "RIFF", 4) != 0 ||
        std::memcmp(raw.data() + 8, "WAVE", 4) != 0) {
        throw std::runtime_error(path + ": missing RIFF/WAVE header");
    }

    bool have_fmt = false;
    FmtChunk fmt;
    const unsigned char* data = nullptr;
    std::size_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= raw.size()) {
        const unsigned char* id = raw.data() + pos;
        std::uint32_t chunk_size = read_u32le(raw.data() + pos + 4);
        pos += 8;
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (pos + chunk_size > raw.size()) {
                throw std::runtime_error(path + ": truncated fmt chunk");
            }
            fmt = parse_fmt(raw.data() + pos, chunk_size, path);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            if (pos + chunk_size > raw.size()) {
                throw std::runtime_error(path + ": truncated data chunk");
            }
            data = raw.data() + pos;
            data_size = chunk_size;
        }
        pos += chunk_size + (chunk_size & 1);
    }
    if (!have_fmt) {
        throw std::runtime_error(path + ": missing fmt chunk");
    }
    if (data == nullptr) {
        throw std::runtime_error(path + ": missing data chunk");
    }

    WavFormat format = checked_format(fmt, path);
    const std::size_t sample_bytes = fmt.bits_per_sample / 8;
    const std::size_t frame_bytes = static_cast<std::size_t>(fmt.channels) * sample_bytes;
    const std::size_t frames = data_size / frame_bytes;

    AudioBuffer buffer;
    buffer.sample_rate = static_cast<int>(fmt.sample_rate);
    buffer.samples.resize(frames);
    if (fmt.channels == 1) {
        for (std::size_t i = 0; i < frames; ++i) {
            buffer.samples[i] = decode_sample(data + i * sample_bytes, format);
        }
    } else {
        // Downmix by averaging the channels of each frame.
        for (std::size_t i = 0; i < frames; ++i) {
            float sum = 0.0f;
            for (std::size_t c = 0; c < fmt.channels; ++c) {
                sum += decode_sample(data + i * frame_bytes + c * sample_bytes, format);
            }
            buffer.samples[i] = sum / static_cast<float>(fmt.channels);
        }
    }
    return buffer;
}

void write_wav(const AudioBuffer& buffer, const std::string& path, WavFormat format) {
    if (buffer.sample_rate <= 0) {
        throw std::invalid_argument("sample rate must be positive");
    }
    const std::uint32_t n = static_cast<std::uint32_t>(buffer.samples.size());
    const std::uint16_t sample_bytes = format == WavFormat::pcm16 ? 2 : 4;
    const std::uint32_t data_size = n * sample_bytes;
    const std::uint32_t fmt_size = format == WavFormat::pcm16 ? 16 : 18;
    const std::uint32_t fact_size = format == WavFormat::pcm16 ? 0 : 12;  // header + length
    const std::uint32_t riff_size = 4 + (8 + fmt_size) + fact_size + (8 + data_size);

    std::string out;
    out.reserve(12 + 8 + fmt_size + fact_size + 8 + data_size);
    out += "RIFF";
    append_u32le(out, riff_size);
    out += "WAVE";
    out += "fmt ";
    append_u32le(out, fmt_size);
    append_u16le(out, format == WavFormat::pcm16 ? kFormatPcm : kFormatFloat);
    append_u16le(out, 1);  // mono
    append_u32le(out, static_cast<std::uint32_t>(buffer.sample_rate));
    append_u32le(out, static_cast<std::uint32_t>(buffer.sample_rate) * sample_bytes);
    append_u16le(out, sample_bytes);
    append_u16le(out, static_cast<std::uint16_t>(sample_bytes * 8));
    if (format == WavFormat::float32) {
        append_u16le(out, 0);  // no fmt extension
        out += "fact";
        append_u32le(out, 4);
        append_u32le(out, n);
    }
    out += "data";
    append_u32le(out, data_size);
    for (float sample : buffer.samples) {
        if (format == WavFormat::pcm16) {
            long long scaled = std::llround(static_cast<double>(sample) * 32768.0);
            scaled = std::clamp<long long>(scaled, -32768, 32767);
            append_u16le(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
        } else {
            append_u32le(out, std::bit_cast<std::uint32_t>(sample));
        }
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw std::runtime_error("cannot open file for writing: " + path);
    }
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) {
        throw std::runtime_error("write failed: " + path);
    }
}

}  // namespace meteraug
