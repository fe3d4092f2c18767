#include <cstdio>

#include "doctest.h"
#include "helpers.h"
#include "speechpipe/cmvn.h"

using namespace speechpipe;

namespace {

FeatureMatrix features_from(const MatrixF& frames) {
  FeatureMatrix f;
  f.frames = frames;
  return f;
}

}  // namespace

TEST_CASE("cmvn of a single constant frame: mean exact, variance floored") {
  FeatureMatrix f = features_from(MatrixF::Ones(1, 80));
  CmvnStats stats = estimate_cmvn(std::span<const FeatureMatrix>(&f, 1));
  CHECK(stats.frame_count == 1);
  for (int d = 0; d < 80; ++d) {
    CHECK(stats.mean[d] == doctest::Approx(1.0));
    CHECK(stats.variance[d] == doctest::Approx(CmvnStats::kVarianceFloor));
  }
}

TEST_CASE("cmvn of frames 0 and 2 gives population variance 1") {
  MatrixF frames(2, 4);
  frames.row(0).setZero();
  frames.row(1).setConstant(2.0f);
  FeatureMatrix f = features_from(frames);
  CmvnStats stats = estimate_cmvn(std::span<const FeatureMatrix>(&f, 1));
  for (int d = 0; d < 4; ++d) {
    CHECK(stats.mean[d] == doctest::Approx(1.0));
    CHECK(stats.variance[d] == doctest::Approx(1.0));
  }
}

TEST_CASE("cmvn matches a naive two-pass oracle on random data") {
  std::mt19937_64 gen(7);
  FeatureMatrix f = features_from(testutil::random_matrix(gen, 1000, 80, -5, 25));
  CmvnStats stats = estimate_cmvn(std::span<const FeatureMatrix>(&f, 1));

  for (int d = 0; d < 80; ++d) {
    double mean = 0.0;
    for (int t = 0; t < 1000; ++t) mean += f.frames(t, d);
    mean /= 1000.0;
    double var = 0.0;
    for (int t = 0; t < 1000; ++t) {
      double delta = f.frames(t, d) - mean;
      var += delta * delta;
    }
    var /= 1000.0;
    CHECK(std::abs(stats.mean[d] - mean) < 1e-9);
    CHECK(std::abs(stats.variance[d] - var) < 1e-9);
  }
}

TEST_CASE("apply_cmvn with identity stats is the identity") {
  std::mt19937_64 gen(8);
  FeatureMatrix f = features_from(testutil::random_matrix(gen, 40, 8));
  CmvnStats stats;
  stats.mean = VectorD::Zero(8);
  stats.variance = VectorD::Ones(8);
  stats.frame_count = 1;
  FeatureMatrix out = apply_cmvn(f, stats);
  CHECK(out.frames == f.frames);
}

TEST_CASE("apply_cmvn normalizes the corpus that produced the stats") {
  std::mt19937_64 gen(9);
  std::vector<FeatureMatrix> corpus;
  for (int i = 0; i < 3; ++i)
    corpus.push_back(features_from(testutil::random_matrix(gen, 200, 16, -4, 9)));
  CmvnStats stats = estimate_cmvn(corpus);

  CmvnAccumulator check;
  for (const auto& f : corpus) check.add(apply_cmvn(f, stats));
  CmvnStats normalized = check.finalize();
  for (int d = 0; d < 16; ++d) {
    CHECK(normalized.mean[d] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(normalized.variance[d] == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("apply_cmvn maps the mean frame to zero") {
  CmvnStats stats;
  stats.mean = VectorD::Constant(5, 3.25);
  stats.variance = VectorD::Constant(5, 2.0);
  stats.frame_count = 10;
  FeatureMatrix f = features_from(MatrixF::Constant(1, 5, 3.25f));
  FeatureMatrix out = apply_cmvn(f, stats);
  for (int d = 0; d < 5; ++d) CHECK(out.frames(0, d) == 0.0f);
}

TEST_CASE("cmvn errors: empty corpus and dimension mismatch") {
  CHECK_THROWS_AS(estimate_cmvn({}), InvalidArgumentError);

  CmvnStats stats;
  stats.mean = VectorD::Zero(4);
  stats.variance = VectorD::Ones(4);
  stats.frame_count = 1;
  FeatureMatrix f = features_from(MatrixF::Zero(2, 8));
  CHECK_THROWS_AS(apply_cmvn(f, stats), DimensionError);
}

TEST_CASE("cmvn stats survive a JSON round trip") {
  std::mt19937_64 gen(10);
  FeatureMatrix f = features_from(testutil::random_matrix(gen, 50, 12));
  CmvnStats stats = estimate_cmvn(std::span<const FeatureMatrix>(&f, 1));

  std::string path = "cmvn_roundtrip_test.json";
  save_cmvn(stats, path);
  CmvnStats loaded = load_cmvn(path);
  CHECK(loaded.frame_count == stats.frame_count);
  CHECK(loaded.mean == stats.mean);
  CHECK(loaded.variance == stats.variance);
  std::remove(path.c_str());

  CHECK_THROWS_AS(cmvn_from_json("{\"version\": 2}"), FormatError);
  CHECK_THROWS_AS(cmvn_from_json("not json"), FormatError);
}
