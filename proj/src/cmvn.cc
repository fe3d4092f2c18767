#include "speechpipe/cmvn.h"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace speechpipe {

void CmvnAccumulator::add(const FeatureMatrix& features) {
  const auto& x = features.frames;
  if (x.rows() == 0) return;
  if (count_ == 0) {
    mean_ = VectorD::Zero(x.cols());
    m2_ = VectorD::Zero(x.cols());
  } else if (mean_.size() != x.cols()) {
    throw DimensionError("cmvn accumulate: dimension changed mid-stream");
  }
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    ++count_;
    VectorD row = x.row(t).cast<double>();
    VectorD delta = row - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta.cwiseProduct(row - mean_);
  }
}

CmvnStats CmvnAccumulator::finalize() const {
  if (count_ == 0)
    throw InvalidArgumentError("cmvn estimation requires at least one frame");
  CmvnStats stats;
  stats.frame_count = count_;
  stats.mean = mean_;
  stats.variance =
      (m2_ / static_cast<double>(count_)).cwiseMax(CmvnStats::kVarianceFloor);
  return stats;
}

CmvnStats estimate_cmvn(std::span<const FeatureMatrix> corpus) {
  CmvnAccumulator acc;
  for (const auto& f : corpus) acc.add(f);
  return acc.finalize();
}

FeatureMatrix apply_cmvn(const FeatureMatrix& features, const CmvnStats& stats) {
  if (features.frames.cols() != stats.mean.size())
    throw DimensionError("apply_cmvn: feature dim " +
                         std::to_string(features.frames.cols()) +
                         " != stats dim " + std::to_string(stats.mean.size()));
  FeatureMatrix out = features;
  VectorD inv_std = stats.variance.cwiseSqrt().cwiseInverse();
  for (Eigen::Index t = 0; t < out.frames.rows(); ++t) {
    VectorD row = features.frames.row(t).cast<double>();
    out.frames.row(t) =
        ((row - stats.mean).cwiseProduct(inv_std)).cast<float>();
  }
  return out;
}

std::string cmvn_to_json(const CmvnStats& stats) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["frame_count"] = stats.frame_count;
  j["mean"] = std::vector<double>(stats.mean.data(),
                                  stats.mean.data() + stats.mean.size());
  j["variance"] = std::vector<double>(
      stats.variance.data(), stats.variance.data() + stats.variance.size());
  return j.dump();
}

CmvnStats cmvn_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("cmvn stats: bad JSON: ") + e.what());
  }
  if (!j.contains("version") || j["version"].get<int>() != 1)
    throw FormatError("cmvn stats: unsupported or missing version");
  if (!j.contains("mean") || !j.contains("variance") ||
      !j.contains("frame_count"))
    throw FormatError("cmvn stats: missing fields");
  auto mean = j["mean"].get<std::vector<double>>();
  auto var = j["variance"].get<std::vector<double>>();
  if (mean.size() != var.size())
    throw FormatError("cmvn stats: mean/variance size mismatch");
  CmvnStats stats;
  stats.frame_count = j["frame_count"].get<int64_t>();
  if (stats.frame_count <= 0) throw FormatError("cmvn stats: frame_count <= 0");
  stats.mean = Eigen::Map<const VectorD>(mean.data(), mean.size());
  stats.variance = Eigen::Map<const VectorD>(var.data(), var.size());
  if ((stats.variance.array() <= 0).any())
    throw FormatError("cmvn stats: non-positive variance");
  return stats;
}

void save_cmvn(const CmvnStats& stats, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write cmvn stats: " + path);
  out << cmvn_to_json(stats) << "\n";
}

CmvnStats load_cmvn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read cmvn stats: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return cmvn_from_json(text);
}

}  // namespace speechpipe
