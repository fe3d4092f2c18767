#pragma once

#include <string>

#include "speechpipe/dfsmn.h"
#include "speechpipe/fbank.h"

namespace speechpipe {

// Versioned little-endian dumps so features and posteriors can move between
// the CLI, tests, and other tooling without a model in the loop.
//   features:  "SPFB" | u32 version | u32 T | u32 D | f64 shift | f64 len
//              | float32 row-major T x D
//   posterior: "SPPT" | u32 version | u32 T | u32 K | f64 shift
//              | K x (u32 len + bytes) channel names | float32 T x K
void save_features(const FeatureMatrix& features, const std::string& path);
FeatureMatrix load_features(const std::string& path);

void save_track(const PosteriorTrack& track, const std::string& path);
PosteriorTrack load_track(const std::string& path);

}  // namespace speechpipe
