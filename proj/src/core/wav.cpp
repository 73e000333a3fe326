#include "wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "linalg.hpp"

namespace sdrecon {

namespace {

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_wav: cannot open " + path);
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw UnsupportedError("read_wav: not a RIFF/WAVE file: " + path);
  }
  int channels = 0, rate = 0, bits = 0;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = get_u32(bytes.data() + pos + 4);
    const unsigned char* body = bytes.data() + pos + 8;
    if (pos + 8 + size > bytes.size()) throw ParameterError("read_wav: truncated chunk");
    if (std::memcmp(bytes.data() + pos, "fmt ", 4) == 0) {
      if (size < 16) throw ParameterError("read_wav: short fmt chunk");
      const int format = get_u16(body);
      channels = get_u16(body + 2);
      rate = static_cast<int>(get_u32(body + 4));
      bits = get_u16(body + 14);
      if (format != 1 || bits != 16) throw UnsupportedError("read_wav: only 16-bit PCM is supported");
      if (channels < 1 || channels > 2) throw UnsupportedError("read_wav: mono or stereo only");
      have_fmt = true;
    } else if (std::memcmp(bytes.data() + pos, "data", 4) == 0) {
      if (!have_fmt) throw ParameterError("read_wav: data chunk before fmt chunk");
      WavData wav;
      wav.sample_rate = rate;
      const std::size_t frames = size / (2u * static_cast<unsigned>(channels));
      wav.channels.assign(static_cast<std::size_t>(channels), std::vector<double>(frames));
      for (std::size_t f = 0; f < frames; ++f) {
        for (int c = 0; c < channels; ++c) {
          const auto raw = static_cast<std::int16_t>(
              get_u16(body + 2 * (f * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c))));
          wav.channels[static_cast<std::size_t>(c)][f] = raw / 32768.0;
        }
      }
      return wav;
    }
    pos += 8 + size + (size & 1u);
  }
  throw ParameterError("read_wav: no data chunk in " + path);
}

void write_wav(const std::string& path, const WavData& wav) {
  const std::size_t nch = wav.channels.size();
  if (nch < 1 || nch > 2) throw UnsupportedError("write_wav: mono or stereo only");
  const std::size_t frames = wav.frames();
  for (const auto& ch : wav.channels) {
    if (ch.size() != frames) throw DimensionError("write_wav: channel lengths differ");
  }
  if (wav.sample_rate < 1) throw ParameterError("write_wav: bad sample rate");
  const auto data_size = static_cast<std::uint32_t>(frames * nch * 2);
  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, static_cast<std::uint16_t>(nch));
  put_u32(out, static_cast<std::uint32_t>(wav.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(wav.sample_rate * nch * 2));
  put_u16(out, static_cast<std::uint16_t>(nch * 2));
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_size);
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t c = 0; c < nch; ++c) {
      const double v = std::clamp(wav.channels[c][f], -1.0, 1.0);
      const long q = std::clamp(std::lround(v * 32768.0), -32768L, 32767L);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("write_wav: cannot open " + path);
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write_wav: write failed for " + path);
}

}  // namespace sdrecon
