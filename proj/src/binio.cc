#include "speechpipe/binio.h"

#include <cstring>
#include <fstream>

namespace speechpipe {

namespace {

void write_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  out.write(reinterpret_cast<char*>(b), 4);
}

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 |
         uint32_t(b[3]) << 24;
}

void expect_magic(std::istream& in, const char* magic, const std::string& path) {
  char got[4];
  in.read(got, 4);
  if (!in || std::memcmp(got, magic, 4) != 0)
    throw FormatError(std::string("bad magic, expected ") + magic + ": " + path);
  uint32_t version = read_u32(in);
  if (version != 1)
    throw FormatError("unsupported dump version " + std::to_string(version) +
                      ": " + path);
}

}  // namespace

void save_features(const FeatureMatrix& features, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write feature dump: " + path);
  out.write("SPFB", 4);
  write_u32(out, 1);
  write_u32(out, static_cast<uint32_t>(features.frames.rows()));
  write_u32(out, static_cast<uint32_t>(features.frames.cols()));
  out.write(reinterpret_cast<const char*>(&features.frame_shift_s), 8);
  out.write(reinterpret_cast<const char*>(&features.frame_len_s), 8);
  out.write(reinterpret_cast<const char*>(features.frames.data()),
            features.frames.size() * sizeof(float));
  if (!out) throw FormatError("short write to feature dump: " + path);
}

FeatureMatrix load_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open feature dump: " + path);
  expect_magic(in, "SPFB", path);
  uint32_t t = read_u32(in), d = read_u32(in);
  FeatureMatrix f;
  in.read(reinterpret_cast<char*>(&f.frame_shift_s), 8);
  in.read(reinterpret_cast<char*>(&f.frame_len_s), 8);
  f.frames.resize(t, d);
  in.read(reinterpret_cast<char*>(f.frames.data()),
          f.frames.size() * sizeof(float));
  if (!in) throw FormatError("truncated feature dump: " + path);
  return f;
}

void save_track(const PosteriorTrack& track, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write posterior dump: " + path);
  out.write("SPPT", 4);
  write_u32(out, 1);
  write_u32(out, static_cast<uint32_t>(track.values.rows()));
  write_u32(out, static_cast<uint32_t>(track.values.cols()));
  out.write(reinterpret_cast<const char*>(&track.frame_shift_s), 8);
  for (const auto& name : track.channel_names) {
    write_u32(out, static_cast<uint32_t>(name.size()));
    out.write(name.data(), name.size());
  }
  MatrixF values = track.values.cast<float>();
  out.write(reinterpret_cast<const char*>(values.data()),
            values.size() * sizeof(float));
  if (!out) throw FormatError("short write to posterior dump: " + path);
}

PosteriorTrack load_track(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open posterior dump: " + path);
  expect_magic(in, "SPPT", path);
  uint32_t t = read_u32(in), k = read_u32(in);
  PosteriorTrack track;
  in.read(reinterpret_cast<char*>(&track.frame_shift_s), 8);
  for (uint32_t i = 0; i < k; ++i) {
    uint32_t len = read_u32(in);
    if (!in || len > 1024) throw FormatError("bad channel name: " + path);
    std::string name(len, '\0');
    in.read(name.data(), len);
    track.channel_names.push_back(name);
  }
  MatrixF values(t, k);
  in.read(reinterpret_cast<char*>(values.data()), values.size() * sizeof(float));
  if (!in) throw FormatError("truncated posterior dump: " + path);
  track.values = values.cast<double>();
  return track;
}

}  // namespace speechpipe
