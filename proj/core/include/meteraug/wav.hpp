#pragma once

#include <cstddef>
#include <string>

#include "meteraug/audio.hpp"

namespace meteraug {

enum class WavFormat { pcm16, float32 };

struct WavInfo {
    int sample_rate = 0;
    int channels = 0;
    std::size_t frames = 0;
    WavFormat format = WavFormat::pcm16;

    double duration_s() const {
        return sample_rate > 0 ? static_cast<double>(frames) / sample_rate : 0.0;
    }
};

// Header-only probe; skips the sample data.
WavInfo wav_info(const std::string& path);

// Reads 16-bit PCM or 32-bit float RIFF WAV. Multichannel input is downmixed
// to mono by averaging channels; float32 mono reads back bit-exact.
AudioBuffer read_wav(const std::string& path);

// Writes mono WAV in the requested sample format.
void write_wav(const AudioBuffer& buffer, const std::string& path,
               WavFormat format = WavFormat::float32);

}  // namespace meteraug
