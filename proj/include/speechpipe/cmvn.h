#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "speechpipe/fbank.h"
#include "speechpipe/types.h"

namespace speechpipe {

// Corpus-wide per-dimension statistics. Variance is the population variance,
// floored at kVarianceFloor so constant dimensions stay usable.
struct CmvnStats {
  VectorD mean;
  VectorD variance;
  int64_t frame_count = 0;

  static constexpr double kVarianceFloor = 1e-8;
};

// Streaming Welford accumulator; single-owner during estimation.
class CmvnAccumulator {
 public:
  void add(const FeatureMatrix& features);
  CmvnStats finalize() const;  // throws on zero frames
  int64_t frame_count() const { return count_; }

 private:
  int64_t count_ = 0;
  VectorD mean_;
  VectorD m2_;
};

CmvnStats estimate_cmvn(std::span<const FeatureMatrix> corpus);

// out[t,d] = (in[t,d] - mean[d]) / sqrt(variance[d])
FeatureMatrix apply_cmvn(const FeatureMatrix& features, const CmvnStats& stats);

// Versioned JSON document {version, frame_count, mean[], variance[]}.
void save_cmvn(const CmvnStats& stats, const std::string& path);
CmvnStats load_cmvn(const std::string& path);
std::string cmvn_to_json(const CmvnStats& stats);
CmvnStats cmvn_from_json(const std::string& text);

}  // namespace speechpipe
