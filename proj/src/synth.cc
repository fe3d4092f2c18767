#include "speechpipe/synth.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace speechpipe {

namespace {

// Hand-rolled draws keep the corpus bit-identical across standard libraries.
double unit_uniform(std::mt19937_64& gen) {
  return std::ldexp(static_cast<double>(gen() >> 11), -53);
}

double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * unit_uniform(gen);
}

double gaussian(std::mt19937_64& gen) {
  double u1 = std::max(unit_uniform(gen), 1e-12);
  double u2 = unit_uniform(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int16_t clip16(double v) {
  return static_cast<int16_t>(std::clamp(v, -32768.0, 32767.0));
}

void render_region(std::mt19937_64& gen, RegionKind kind, int sample_rate,
                   int16_t* out, int n) {
  const double dt = 1.0 / sample_rate;
  switch (kind) {
    case RegionKind::kSilence:
      std::fill(out, out + n, int16_t{0});
      break;
    case RegionKind::kNoise: {
      double amp = uniform(gen, 150.0, 450.0);
      for (int i = 0; i < n; ++i) out[i] = clip16(amp * gaussian(gen));
      break;
    }
    case RegionKind::kSpeech: {
      // Harmonic comb with syllable-rate amplitude modulation and F0 drift.
      double f0 = uniform(gen, 120.0, 280.0);
      double drift = uniform(gen, -20.0, 20.0);
      double am_rate = uniform(gen, 3.0, 7.0);
      double am_phase = uniform(gen, 0.0, 2.0 * M_PI);
      int harmonics = 6 + static_cast<int>(uniform(gen, 0.0, 4.0));
      double amp = uniform(gen, 5000.0, 9000.0);
      for (int i = 0; i < n; ++i) {
        double t = i * dt;
        double f = f0 + drift * t;
        double v = 0.0;
        for (int h = 1; h <= harmonics; ++h)
          v += std::sin(2.0 * M_PI * h * f * t) / h;
        double env = 0.55 + 0.45 * std::sin(2.0 * M_PI * am_rate * t + am_phase);
        out[i] = clip16(amp * env * v / 2.0);
      }
      break;
    }
    case RegionKind::kSinging: {
      // Sustained harmonic tone with vibrato.
      double f0 = uniform(gen, 200.0, 400.0);
      double vib_rate = uniform(gen, 5.0, 7.0);
      double vib_depth = uniform(gen, 0.02, 0.04);
      int harmonics = 8 + static_cast<int>(uniform(gen, 0.0, 4.0));
      double amp = uniform(gen, 5000.0, 9000.0);
      double phase = 0.0;
      for (int i = 0; i < n; ++i) {
        double t = i * dt;
        double f = f0 * (1.0 + vib_depth * std::sin(2.0 * M_PI * vib_rate * t));
        phase += 2.0 * M_PI * f * dt;
        double v = 0.0;
        for (int h = 1; h <= harmonics; ++h) v += std::sin(h * phase) / h;
        out[i] = clip16(amp * v / 2.0);
      }
      break;
    }
    case RegionKind::kMusic: {
      // Steady three-note chord in a higher register than the voice comb.
      double root = uniform(gen, 500.0, 2500.0);
      double amp = uniform(gen, 3000.0, 7000.0);
      const double ratios[3] = {1.0, 1.2599, 1.4983};  // root, major 3rd, 5th
      for (int i = 0; i < n; ++i) {
        double t = i * dt;
        double v = 0.0;
        for (double r : ratios) v += std::sin(2.0 * M_PI * root * r * t);
        out[i] = clip16(amp * v / 3.0);
      }
      break;
    }
  }
}

}  // namespace

SynthCorpus generate_synthetic_corpus(uint64_t seed, const SynthSpec& spec) {
  if (spec.num_utterances < 1 || spec.utterance_seconds <= 0 ||
      spec.min_region_s <= 0 || spec.max_region_s < spec.min_region_s)
    throw InvalidArgumentError("synthetic corpus: bad spec");

  SynthCorpus corpus;
  corpus.spec = spec;
  std::mt19937_64 gen(seed);
  const RegionKind kinds[5] = {RegionKind::kSilence, RegionKind::kNoise,
                               RegionKind::kSpeech, RegionKind::kSinging,
                               RegionKind::kMusic};

  for (int u = 0; u < spec.num_utterances; ++u) {
    SynthUtterance utt;
    utt.audio.sample_rate = spec.sample_rate;
    const int total = static_cast<int>(
        std::llround(spec.utterance_seconds * spec.sample_rate));
    utt.audio.samples.resize(total, 0);

    int pos = 0;
    RegionKind prev = RegionKind::kSilence;
    while (pos < total) {
      double len_s = uniform(gen, spec.min_region_s, spec.max_region_s);
      int len = std::min(total - pos,
                         static_cast<int>(std::llround(len_s * spec.sample_rate)));
      RegionKind kind = kinds[static_cast<int>(uniform(gen, 0.0, 5.0)) % 5];
      if (kind == prev && kind != RegionKind::kSilence)
        kind = RegionKind::kSilence;  // avoid indistinct merged regions
      render_region(gen, kind, spec.sample_rate, utt.audio.samples.data() + pos,
                    len);
      utt.regions.push_back({kind, static_cast<double>(pos) / spec.sample_rate,
                             static_cast<double>(pos + len) / spec.sample_rate});
      prev = kind;
      pos += len;
    }
    corpus.utterances.push_back(std::move(utt));
  }
  return corpus;
}

MatrixF mvad_frame_labels(const SynthUtterance& utt, int64_t num_frames,
                          double frame_shift_s, double frame_len_s) {
  MatrixF labels = MatrixF::Zero(num_frames, 3);
  for (int64_t t = 0; t < num_frames; ++t) {
    double center = t * frame_shift_s + frame_len_s / 2.0;
    for (const auto& region : utt.regions) {
      if (center >= region.start_s && center < region.end_s) {
        switch (region.kind) {
          case RegionKind::kSpeech: labels(t, 0) = 1.0f; break;
          case RegionKind::kSinging: labels(t, 1) = 1.0f; break;
          case RegionKind::kMusic: labels(t, 2) = 1.0f; break;
          default: break;
        }
        break;
      }
    }
  }
  return labels;
}

MatrixF vad_frame_labels(const SynthUtterance& utt, int64_t num_frames,
                         double frame_shift_s, double frame_len_s) {
  MatrixF mvad = mvad_frame_labels(utt, num_frames, frame_shift_s, frame_len_s);
  // voice = union of speech and singing; music/noise/silence are non-voice.
  MatrixF vad(num_frames, 1);
  for (int64_t t = 0; t < num_frames; ++t)
    vad(t, 0) = std::max(mvad(t, 0), mvad(t, 1));
  return vad;
}

std::vector<LabeledUtterance> corpus_to_dataset(const SynthCorpus& corpus,
                                                bool multi_label,
                                                const FbankConfig& fbank_cfg,
                                                CmvnStats* stats_out) {
  std::vector<LabeledUtterance> dataset;
  dataset.reserve(corpus.utterances.size());
  CmvnAccumulator acc;
  for (const auto& utt : corpus.utterances) {
    LabeledUtterance ex;
    ex.features = compute_fbank(utt.audio, fbank_cfg);
    ex.labels = multi_label
        ? mvad_frame_labels(utt, ex.features.num_frames(),
                            ex.features.frame_shift_s, ex.features.frame_len_s)
        : vad_frame_labels(utt, ex.features.num_frames(),
                           ex.features.frame_shift_s, ex.features.frame_len_s);
    acc.add(ex.features);
    dataset.push_back(std::move(ex));
  }
  CmvnStats stats = acc.finalize();
  for (auto& ex : dataset) ex.features = apply_cmvn(ex.features, stats);
  if (stats_out) *stats_out = stats;
  return dataset;
}

}  // namespace speechpipe
