#include "speechpipe/audio.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace speechpipe {

namespace {

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 |
         uint32_t(b[3]) << 24;
}

uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return uint16_t(b[0]) | uint16_t(b[1]) << 8;
}

void write_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  out.write(reinterpret_cast<char*>(b), 4);
}

void write_u16(std::ostream& out, uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF)};
  out.write(reinterpret_cast<char*>(b), 2);
}

}  // namespace

AudioBuffer read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open wav file: " + path);

  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0)
    throw FormatError("not a RIFF file: " + path);
  read_u32(in);  // riff size, unused
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0)
    throw FormatError("not a WAVE file: " + path);

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  bool have_fmt = false;
  std::vector<int16_t> interleaved;

  while (in.read(tag, 4)) {
    uint32_t chunk_size = read_u32(in);
    if (!in) break;
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      format = read_u16(in);
      channels = read_u16(in);
      sample_rate = read_u32(in);
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      if (chunk_size > 16) in.seekg(chunk_size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) throw FormatError("wav data chunk before fmt: " + path);
      if (format != 1) throw FormatError("wav is not PCM (format tag " +
                                         std::to_string(format) + "): " + path);
      if (bits != 16)
        throw FormatError("only 16-bit PCM supported, got " +
                          std::to_string(bits) + " bits: " + path);
      size_t n = chunk_size / 2;
      interleaved.resize(n);
      in.read(reinterpret_cast<char*>(interleaved.data()), n * 2);
      if (static_cast<size_t>(in.gcount()) != n * 2)
        throw FormatError("truncated wav data chunk: " + path);
      break;
    } else {
      in.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    }
  }
  if (!have_fmt) throw FormatError("wav missing fmt chunk: " + path);
  if (channels == 0) throw FormatError("wav reports zero channels: " + path);

  AudioBuffer audio;
  audio.sample_rate = static_cast<int>(sample_rate);
  audio.channel_count = 1;
  if (channels == 1) {
    audio.samples = std::move(interleaved);
  } else {
    size_t frames = interleaved.size() / channels;
    audio.samples.resize(frames);
    for (size_t t = 0; t < frames; ++t) {
      int32_t acc = 0;
      for (int c = 0; c < channels; ++c) acc += interleaved[t * channels + c];
      audio.samples[t] = static_cast<int16_t>(acc / channels);
    }
  }
  return audio;
}

void write_wav(const AudioBuffer& audio, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open wav file for write: " + path);
  uint32_t data_bytes = static_cast<uint32_t>(audio.samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<uint32_t>(audio.sample_rate));
  write_u32(out, static_cast<uint32_t>(audio.sample_rate * 2));
  write_u16(out, 2);
  write_u16(out, 16);
  out.write("data", 4);
  write_u32(out, data_bytes);
  out.write(reinterpret_cast<const char*>(audio.samples.data()), data_bytes);
  if (!out) throw FormatError("short write to wav file: " + path);
}

AudioBuffer resample_linear(const AudioBuffer& audio, int target_rate) {
  if (target_rate <= 0) throw InvalidArgumentError("target rate must be > 0");
  if (audio.sample_rate == target_rate) return audio;
  AudioBuffer out;
  out.sample_rate = target_rate;
  if (audio.samples.empty()) return out;

  double ratio = static_cast<double>(audio.sample_rate) / target_rate;
  size_t n_out = static_cast<size_t>(
      std::floor((audio.samples.size() - 1) / ratio)) + 1;
  out.samples.resize(n_out);
  for (size_t i = 0; i < n_out; ++i) {
    double pos = i * ratio;
    size_t i0 = static_cast<size_t>(pos);
    size_t i1 = std::min(i0 + 1, audio.samples.size() - 1);
    double frac = pos - i0;
    double v = (1.0 - frac) * audio.samples[i0] + frac * audio.samples[i1];
    out.samples[i] = static_cast<int16_t>(std::lround(v));
  }
  return out;
}

AudioBuffer crop_audio(const AudioBuffer& audio, double start_s, double end_s) {
  if (end_s < start_s) throw InvalidArgumentError("crop end before start");
  auto clamp_index = [&](double t) {
    double idx = t * audio.sample_rate;
    return static_cast<size_t>(
        std::clamp<double>(std::llround(idx), 0.0,
                           static_cast<double>(audio.samples.size())));
  };
  size_t b = clamp_index(start_s), e = clamp_index(end_s);
  AudioBuffer out;
  out.sample_rate = audio.sample_rate;
  out.samples.assign(audio.samples.begin() + b, audio.samples.begin() + e);
  return out;
}

}  // namespace speechpipe
