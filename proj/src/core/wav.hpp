#pragma once

#include <string>
#include <vector>

namespace sdrecon {

/// PCM audio with samples scaled to [-1, 1). One vector per channel.
struct WavData {
  int sample_rate = 44100;
  std::vector<std::vector<double>> channels;

  std::size_t frames() const { return channels.empty() ? 0 : channels.front().size(); }
};

/// Reads a little-endian RIFF/WAVE file with 16-bit PCM, mono or stereo.
WavData read_wav(const std::string& path);
/// Writes 16-bit PCM; samples are clipped to [-1, 1].
void write_wav(const std::string& path, const WavData& wav);

}  // namespace sdrecon
