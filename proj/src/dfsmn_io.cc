#include <cstring>
#include <fstream>
#include <vector>

#include "dfsmn_ops.h"
#include "json.hpp"
#include "speechpipe/dfsmn.h"

namespace speechpipe {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'D', 'W'};
constexpr uint32_t kVersion = 1;

struct TensorEntry {
  std::string name;
  int64_t rows;
  int64_t cols;
};

std::vector<TensorEntry> expected_manifest(const DfsmnConfig& cfg) {
  std::vector<TensorEntry> m;
  m.push_back({"input.weight", cfg.hidden_size, cfg.input_dim});
  m.push_back({"input.bias", cfg.hidden_size, 1});
  for (int b = 0; b < cfg.num_blocks; ++b) {
    std::string p = "block" + std::to_string(b) + ".";
    m.push_back({p + "in_proj.weight", cfg.proj_size, cfg.hidden_size});
    m.push_back({p + "in_proj.bias", cfg.proj_size, 1});
    m.push_back({p + "taps", cfg.proj_size, cfg.tap_len()});
    m.push_back({p + "out_proj.weight", cfg.hidden_size, cfg.proj_size});
    m.push_back({p + "out_proj.bias", cfg.hidden_size, 1});
  }
  m.push_back({"final_ff.weight", cfg.hidden_size, cfg.hidden_size});
  m.push_back({"final_ff.bias", cfg.hidden_size, 1});
  m.push_back({"head.weight", cfg.num_outputs, cfg.hidden_size});
  m.push_back({"head.bias", cfg.num_outputs, 1});
  return m;
}

nlohmann::ordered_json config_to_json(const DfsmnConfig& cfg) {
  return {{"num_blocks", cfg.num_blocks},
          {"hidden_size", cfg.hidden_size},
          {"proj_size", cfg.proj_size},
          {"lookback_order", cfg.lookback_order},
          {"lookahead_order", cfg.lookahead_order},
          {"stride", cfg.stride},
          {"dropout", cfg.dropout},
          {"num_outputs", cfg.num_outputs},
          {"input_dim", cfg.input_dim}};
}

DfsmnConfig config_from_json(const nlohmann::json& j) {
  DfsmnConfig cfg;
  cfg.num_blocks = j.at("num_blocks").get<int>();
  cfg.hidden_size = j.at("hidden_size").get<int>();
  cfg.proj_size = j.at("proj_size").get<int>();
  cfg.lookback_order = j.at("lookback_order").get<int>();
  cfg.lookahead_order = j.at("lookahead_order").get<int>();
  cfg.stride = j.at("stride").get<int>();
  cfg.dropout = j.at("dropout").get<double>();
  cfg.num_outputs = j.at("num_outputs").get<int>();
  cfg.input_dim = j.at("input_dim").get<int>();
  return cfg;
}

void write_u32_le(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  out.write(reinterpret_cast<char*>(b), 4);
}

uint32_t read_u32_le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 |
         uint32_t(b[3]) << 24;
}

}  // namespace

void save_weights(const DfsmnModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open weight file for write: " + path);

  nlohmann::ordered_json header;
  header["config"] = config_to_json(model.config);
  nlohmann::ordered_json tensors = nlohmann::ordered_json::array();
  for (const auto& e : expected_manifest(model.config))
    tensors.push_back({{"name", e.name}, {"rows", e.rows}, {"cols", e.cols}});
  header["tensors"] = tensors;
  std::string header_text = header.dump();

  out.write(kMagic, 4);
  write_u32_le(out, kVersion);
  write_u32_le(out, static_cast<uint32_t>(header_text.size()));
  out.write(header_text.data(), header_text.size());

  // Row-major float32 little-endian payload. Row-major matrices and column
  // vectors are both contiguous in exactly that order.
  detail::for_each_tensor(model, [&](const auto& t) {
    out.write(reinterpret_cast<const char*>(t.data()),
              t.size() * sizeof(float));
  });
  if (!out) throw FormatError("short write to weight file: " + path);
}

DfsmnModel load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open weight file: " + path);

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("not a dfsmn weight file (bad magic): " + path);
  uint32_t version = read_u32_le(in);
  if (version != kVersion)
    throw FormatError("unsupported weight file version " +
                      std::to_string(version) + ": " + path);
  uint32_t header_len = read_u32_le(in);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), header_len);
  if (!in) throw FormatError("truncated weight file header: " + path);

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("weight file header is not valid JSON: ") +
                      e.what());
  }
  DfsmnConfig cfg = config_from_json(header.at("config"));
  cfg.validate();

  auto expected = expected_manifest(cfg);
  const auto& tensors = header.at("tensors");
  if (tensors.size() != expected.size())
    throw FormatError("weight file shape error: header lists " +
                      std::to_string(tensors.size()) + " tensors, config (" +
                      std::to_string(cfg.num_blocks) + " blocks) requires " +
                      std::to_string(expected.size()));
  for (size_t i = 0; i < expected.size(); ++i) {
    if (tensors[i].at("name").get<std::string>() != expected[i].name ||
        tensors[i].at("rows").get<int64_t>() != expected[i].rows ||
        tensors[i].at("cols").get<int64_t>() != expected[i].cols)
      throw FormatError("weight file shape error at tensor '" +
                        expected[i].name + "'");
  }

  DfsmnModel model = make_dfsmn<float>(cfg);
  detail::for_each_tensor(model, [&](auto& t) {
    in.read(reinterpret_cast<char*>(t.data()), t.size() * sizeof(float));
  });
  if (!in) throw FormatError("truncated weight file payload: " + path);
  // Any trailing bytes mean the payload disagrees with the header.
  in.peek();
  if (!in.eof())
    throw FormatError("weight file payload longer than header describes: " +
                      path);
  return model;
}

}  // namespace speechpipe
