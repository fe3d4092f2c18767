// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "speechpipe/cmvn.h"
#include "speechpipe/ctc_align.h"
#include "speechpipe/decode.h"
#include "speechpipe/dfsmn.h"
#include "speechpipe/metrics.h"
#include "speechpipe/mock_components.h"
#include "speechpipe/pipeline.h"
#include "speechpipe/punc.h"
#include "speechpipe/synth.h"
#include "speechpipe/train.h"
#include "speechpipe/utf8.h"
#include "speechpipe/vad_post.h"

using namespace speechpipe;

namespace {

double uniform(std::mt19937_64& gen, double lo = 0.0, double hi = 1.0) {
  return lo + (hi - lo) * std::ldexp(static_cast<double>(gen() >> 11), -53);
}

int uniform_int(std::mt19937_64& gen, int lo, int hi) {
  return lo + static_cast<int>(gen() % static_cast<uint64_t>(hi - lo + 1));
}

struct Criterion {
  std::string name;
  std::function<std::string()> run;  // returns detail; throws on failure
};

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw CheckFailure(message);
}

// --------------------------------------------------------------------------
// 1. Parameter budget under the default configuration.
std::string criterion_parameter_budget() {
  DfsmnConfig cfg;  // 8 blocks, 256/128, look-back 20, look-ahead 20, stride 1
  int64_t count = count_parameters(make_dfsmn<float>(cfg));
  require(count >= 500000 && count <= 700000,
          "parameter count " + std::to_string(count) + " outside [500k, 700k]");
  return std::to_string(count) + " parameters";
}

// --------------------------------------------------------------------------
// 2. Streaming/full equivalence over random chunkings.
std::string criterion_streaming_equivalence() {
  DfsmnConfig cfg;
  cfg.num_blocks = 4;
  cfg.hidden_size = 64;
  cfg.proj_size = 32;
  cfg.lookback_order = 20;
  cfg.lookahead_order = 0;  // causal
  cfg.input_dim = 80;
  DfsmnModel model = init_dfsmn(cfg, 2024);

  std::mt19937_64 gen(77);
  const int frames = 1000;  // 10 s at the 10 ms frame rate
  FeatureMatrix feats;
  feats.frames.resize(frames, 80);
  for (int t = 0; t < frames; ++t)
    for (int d = 0; d < 80; ++d)
      feats.frames(t, d) = static_cast<float>(uniform(gen, -2.0, 2.0));
  PosteriorTrack full = forward_full(model, feats);

  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    StreamState state = init_stream(model);
    int64_t pos = 0;
    while (pos < frames) {
      int64_t n = std::min<int64_t>(uniform_int(gen, 1, 120), frames - pos);
      FeatureMatrix chunk;
      chunk.frames = feats.frames.middleRows(pos, n);
      PosteriorTrack out = forward_streaming(model, state, chunk);
      double diff = (out.values - full.values.middleRows(pos, n))
                        .cwiseAbs()
                        .maxCoeff();
      worst = std::max(worst, diff);
      pos += n;
    }
  }
  require(worst <= 1e-5, "max |streamed - full| = " + std::to_string(worst));
  std::ostringstream detail;
  detail << "100 chunkings, max abs deviation " << worst;
  return detail.str();
}

// --------------------------------------------------------------------------
// 3. Desk-scale VAD training on the seeded synthetic corpus.
std::string criterion_training() {
  SynthSpec spec;  // 60 x 30 s = 30 minutes of audio
  spec.num_utterances = 60;
  spec.utterance_seconds = 30.0;
  SynthCorpus corpus = generate_synthetic_corpus(1, spec);
  auto dataset = corpus_to_dataset(corpus, false, FbankConfig{});

  TrainConfig tc;
  tc.model.num_blocks = 3;
  tc.model.hidden_size = 96;
  tc.model.proj_size = 48;
  tc.model.lookback_order = 8;
  tc.model.lookahead_order = 8;
  tc.model.num_outputs = 1;
  tc.seed = 1;
  tc.epochs = 8;
  tc.batch_utterances = 4;
  tc.holdout_ratio = 0.2;
  tc.patience = 3;
  tc.eval_threshold = 0.5;

  TrainReport report;
  train_frame_classifier(dataset, tc, &report);
  require(report.best_f1 >= 0.95,
          "held-out frame F1 " + std::to_string(report.best_f1) + " < 0.95");
  std::ostringstream detail;
  detail << "30 min corpus, held-out frame F1 " << report.best_f1
         << " at threshold 0.5";
  return detail.str();
}

// --------------------------------------------------------------------------
// 4. CTC forced alignment equals exhaustive enumeration.
namespace ctc {

double brute_force_best(const CtcFrames& frames,
                        const std::vector<Token>& tokens) {
  const int64_t t_total = frames.num_frames();
  const int64_t s_total = 2 * static_cast<int64_t>(tokens.size()) + 1;
  double best = -1e300;
  auto emit = [&](int64_t t, int64_t s) {
    int id = (s % 2 == 0) ? frames.blank_id : tokens[(s - 1) / 2].id;
    return static_cast<double>(frames.log_probs(t, id));
  };
  auto skip_ok = [&](int64_t s) {
    return s % 2 == 1 && s >= 3 &&
           tokens[(s - 1) / 2].id != tokens[(s - 3) / 2].id;
  };
  std::function<void(int64_t, int64_t, double)> walk =
      [&](int64_t t, int64_t s, double score) {
        score += emit(t, s);
        if (t == t_total - 1) {
          if (s == s_total - 1 || s == s_total - 2)
            best = std::max(best, score);
          return;
        }
        walk(t + 1, s, score);
        if (s + 1 < s_total) walk(t + 1, s + 1, score);
        if (s + 2 < s_total && skip_ok(s + 2)) walk(t + 1, s + 2, score);
      };
  walk(0, 0, 0.0);
  walk(0, 1, 0.0);
  return best;
}

}  // namespace ctc

std::string criterion_ctc_alignment() {
  std::mt19937_64 gen(424242);
  int aligned = 0, infeasible = 0;
  for (int seed = 0; seed < 1000; ++seed) {
    int t = uniform_int(gen, 1, 8);
    int v = uniform_int(gen, 2, 4);
    int u = uniform_int(gen, 1, 3);
    std::vector<Token> tokens;
    std::vector<int> ids;
    for (int i = 0; i < u; ++i) {
      int id = uniform_int(gen, 1, v - 1);
      ids.push_back(id);
      tokens.push_back({id, "t" + std::to_string(id)});
    }
    CtcFrames frames;
    frames.log_probs.resize(t, v);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < v; ++j)
        frames.log_probs(i, j) = static_cast<float>(uniform(gen, -5.0, 0.0));

    int64_t min_t = u;
    for (int i = 1; i < u; ++i)
      if (ids[i] == ids[i - 1]) ++min_t;
    if (t < min_t) {
      try {
        forced_align(frames, tokens);
        require(false, "infeasible instance did not throw");
      } catch (const InfeasibleAlignmentError&) {
        ++infeasible;
      }
      continue;
    }

    auto path = forced_align(frames, tokens);
    std::vector<int> collapsed;
    int prev = -1;
    for (int idx : path) {
      if (idx >= 0 && idx != prev) collapsed.push_back(tokens[idx].id);
      prev = idx;
    }
    require(collapsed == ids, "path collapse does not reproduce the tokens");
    double got = path_log_prob(frames, tokens, path);
    double best = ctc::brute_force_best(frames, tokens);
    require(got == best, "path log-prob " + std::to_string(got) +
                             " != enumeration max " + std::to_string(best));
    ++aligned;
  }
  return std::to_string(aligned) + " aligned instances exact, " +
         std::to_string(infeasible) + " infeasible correctly rejected";
}

// --------------------------------------------------------------------------
// 5. AUC-ROC equals the O(n^2) pairwise statistic.
std::string criterion_auc() {
  std::mt19937_64 gen(5150);
  int checked = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    int n = uniform_int(gen, 2, 200);
    std::vector<double> scores(n);
    FrameLabels ref;
    ref.labels.resize(n);
    bool tie_heavy = trial % 2 == 0;
    int positives = 0;
    for (int i = 0; i < n; ++i) {
      scores[i] = tie_heavy ? uniform_int(gen, 0, 3) / 3.0 : uniform(gen);
      ref.labels[i] = gen() & 1;
      positives += ref.labels[i];
    }
    if (positives == 0) ref.labels[0] = 1, ++positives;
    if (positives == n) ref.labels[0] = 0, --positives;

    double pairs = 0.0, wins = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (!(ref.labels[i] == 1 && ref.labels[j] == 0)) continue;
        pairs += 1.0;
        if (scores[i] > scores[j]) wins += 1.0;
        else if (scores[i] == scores[j]) wins += 0.5;
      }
    double expected = 100.0 * wins / pairs;
    double got = auc_roc(scores, ref);
    worst = std::max(worst, std::abs(got - expected));
    require(std::abs(got - expected) <= 1e-9,
            "AUC mismatch " + std::to_string(got) + " vs " +
                std::to_string(expected));
    ++checked;
  }
  std::ostringstream detail;
  detail << checked << " score sets (tie-heavy included), max deviation "
         << worst;
  return detail.str();
}

// --------------------------------------------------------------------------
// 6. CER equals the recursive oracle; macro average reproduces 2.89.
namespace cer_oracle {

int64_t recurse(const std::vector<char32_t>& a, const std::vector<char32_t>& b,
                size_t i, size_t j,
                std::map<std::pair<size_t, size_t>, int64_t>& memo) {
  if (i == a.size()) return static_cast<int64_t>(b.size() - j);
  if (j == b.size()) return static_cast<int64_t>(a.size() - i);
  auto key = std::make_pair(i, j);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  int64_t best;
  if (a[i] == b[j]) {
    best = recurse(a, b, i + 1, j + 1, memo);
  } else {
    best = 1 + std::min({recurse(a, b, i + 1, j + 1, memo),
                         recurse(a, b, i + 1, j, memo),
                         recurse(a, b, i, j + 1, memo)});
  }
  memo[key] = best;
  return best;
}

}  // namespace cer_oracle

std::string criterion_cer() {
  std::mt19937_64 gen(606);
  const char alphabet[] = "abcd";
  for (int trial = 0; trial < 1000; ++trial) {
    auto random_string = [&](int min_len) {
      int n = uniform_int(gen, min_len, 8);
      std::string s;
      for (int i = 0; i < n; ++i) s.push_back(alphabet[uniform_int(gen, 0, 3)]);
      return s;
    };
    std::string ref = random_string(1), hyp = random_string(0);
    auto a = utf8_decode(ref), b = utf8_decode(hyp);
    std::map<std::pair<size_t, size_t>, int64_t> memo;
    double expected =
        100.0 * cer_oracle::recurse(a, b, 0, 0, memo) / a.size();
    require(cer(ref, hyp) == expected, "CER mismatch on " + ref + "/" + hyp);
  }

  std::vector<double> mandarin = {0.64, 2.15, 4.44, 4.32};
  double avg = macro_average(mandarin);
  require(round_half_up(avg, 2) == 2.89,
          "macro average rounded to " + std::to_string(round_half_up(avg, 2)));
  std::ostringstream detail;
  detail << "1000 string pairs exact; macro(0.64, 2.15, 4.44, 4.32) = " << avg
         << " -> 2.89";
  return detail.str();
}

// --------------------------------------------------------------------------
// 7. Segmentation FSM properties on random posterior tracks.
std::string criterion_fsm_properties() {
  std::mt19937_64 gen(31337);
  for (int trial = 0; trial < 1000; ++trial) {
    PostprocessConfig cfg;
    cfg.smooth_window_frames = 1 + 2 * uniform_int(gen, 0, 3);
    cfg.threshold = uniform(gen, 0.2, 0.8);
    cfg.min_voice_ms = uniform_int(gen, 0, 12) * 10;
    cfg.min_silence_ms = uniform_int(gen, 0, 12) * 10;
    cfg.merge_gap_ms = uniform_int(gen, 0, 25) * 10;
    cfg.pad_ms = uniform_int(gen, 0, 12) * 10;
    cfg.max_segment_ms = uniform_int(gen, 40, 250) * 10;

    int frames = uniform_int(gen, 10, 400);
    PosteriorTrack track;
    track.frame_shift_s = 0.010;
    track.values.resize(frames, 1);
    track.channel_names = {"voice"};
    int t = 0;
    while (t < frames) {
      int run = uniform_int(gen, 1, 30);
      double level = uniform(gen);
      for (int i = 0; i < run && t < frames; ++i, ++t)
        track.values(t, 0) = std::clamp(level + uniform(gen, -0.1, 0.1), 0.0, 1.0);
    }

    PosteriorTrack sm = smooth(track, cfg.smooth_window_frames);
    auto decisions = binarize(sm, cfg.threshold);
    auto segs = segments_from_decisions(decisions, cfg, track.frame_shift_s);

    // sorted, disjoint, minimum durations
    for (size_t i = 0; i < segs.size(); ++i) {
      require(segs[i].end_s > segs[i].start_s, "empty segment");
      require(segs[i].end_s - segs[i].start_s >=
                  cfg.min_voice_ms / 1000.0 - 1e-9,
              "segment shorter than min_voice");
      if (i > 0) {
        require(segs[i].start_s >= segs[i - 1].end_s, "overlapping segments");
        require(segs[i].start_s - segs[i - 1].end_s >=
                    cfg.min_silence_ms / 1000.0 - 1e-9,
                "gap shorter than min_silence");
      }
    }

    // streaming/offline agreement (pre-refinement)
    StreamingVadFsm fsm(cfg, track.frame_shift_s);
    std::vector<StreamEvent> events;
    for (int u = 0; u < frames; ++u) {
      auto e = fsm.step(sm.values(u, 0));
      events.insert(events.end(), e.begin(), e.end());
    }
    auto tail = fsm.finish();
    events.insert(events.end(), tail.begin(), tail.end());
    require(events.size() == 2 * segs.size(), "event/segment count mismatch");
    for (size_t i = 0; i < segs.size(); ++i) {
      require(events[2 * i].time_s == segs[i].start_s, "start time mismatch");
      require(events[2 * i + 1].time_s == segs[i].end_s, "end time mismatch");
    }

    // refine idempotence
    auto once = refine_segments(segs, cfg, sm);
    auto twice = refine_segments(once, cfg, sm);
    require(once.size() == twice.size(), "refine changed segment count");
    for (size_t i = 0; i < once.size(); ++i) {
      require(std::abs(once[i].start_s - twice[i].start_s) < 1e-12 &&
                  std::abs(once[i].end_s - twice[i].end_s) < 1e-12,
              "refine not idempotent");
    }
  }
  return "1000 random tracks: order, durations, idempotence, stream parity";
}

// --------------------------------------------------------------------------
// 8. Confidence examples, permutation invariance, monotonicity.
std::string criterion_confidence() {
  Hypothesis hyp;
  hyp.posteriors = {0.9, 0.9};
  require(std::abs(geometric_confidence(hyp).value - 0.9) < 1e-12,
          "[0.9, 0.9] should give 0.9");
  hyp.posteriors = {1.0, 0.25};
  require(std::abs(geometric_confidence(hyp).value - 0.5) < 1e-12,
          "[1.0, 0.25] should give 0.5");

  std::mt19937_64 gen(88);
  for (int trial = 0; trial < 100; ++trial) {
    Hypothesis h;
    int n = uniform_int(gen, 1, 10);
    for (int i = 0; i < n; ++i) h.posteriors.push_back(uniform(gen, 0.01, 1.0));
    double base = geometric_confidence(h).value;

    Hypothesis shuffled = h;
    std::shuffle(shuffled.posteriors.begin(), shuffled.posteriors.end(), gen);
    require(std::abs(geometric_confidence(shuffled).value - base) < 1e-12,
            "permutation changed the confidence");

    Hypothesis raised = h;
    int k = uniform_int(gen, 0, n - 1);
    raised.posteriors[k] = std::min(1.0, raised.posteriors[k] + uniform(gen));
    require(geometric_confidence(raised).value >= base - 1e-12,
            "raising a posterior lowered the confidence");
  }
  return "examples exact, permutation-invariant, monotone over 100 trials";
}

// --------------------------------------------------------------------------
// 9. Hierarchical LID decoding and beam/enumeration agreement.
std::string criterion_lid() {
  const auto& reg = LidLabelRegistry::standard();
  {
    TableScorer scorer(reg.vocab_size(), 0, 1);
    int zh = reg.token_id("zh"), yue = reg.token_id("yue");
    std::vector<double> first(reg.vocab_size(), 0.0);
    first[zh] = 0.9;
    first[reg.token_id("en")] = 0.1;
    scorer.set({}, first);
    std::vector<double> second(reg.vocab_size(), 0.0);
    second[yue] = 0.8;
    second[1] = 0.2;
    scorer.set({zh}, second);
    LidResult r = lid_decode(scorer, reg, 4);
    require(r.language == "zh" && r.dialect && *r.dialect == "yue",
            "zh/yue decode failed");
    require(std::abs(r.confidence - 0.85) < 1e-12,
            "confidence should be mean(0.9, 0.8)");
  }
  {
    TableScorer scorer(reg.vocab_size(), 0, 1);
    std::vector<double> first(reg.vocab_size(), 0.0);
    first[reg.token_id("en")] = 0.95;
    first[reg.token_id("zh")] = 0.05;
    scorer.set({}, first);
    LidResult r = lid_decode(scorer, reg, 4);
    require(r.language == "en" && !r.dialect, "en decode failed");
    require(std::abs(r.confidence - 0.95) < 1e-12, "en confidence wrong");
  }

  // beam search == exhaustive enumeration on toy vocabularies
  std::mt19937_64 gen(909);
  for (int trial = 0; trial < 50; ++trial) {
    const int vocab = 5, max_len = 2;
    TableScorer scorer(vocab, 0, 1);
    auto random_dist = [&] {
      std::vector<double> d(vocab, 0.0);
      double sum = 0.0;
      for (int i = 1; i < vocab; ++i) {
        d[i] = uniform(gen, 0.05, 1.0);
        sum += d[i];
      }
      for (auto& p : d) p /= sum;
      return d;
    };
    scorer.set({}, random_dist());
    for (int a = 2; a < vocab; ++a) {
      scorer.set({a}, random_dist());
      for (int b = 2; b < vocab; ++b) scorer.set({a, b}, random_dist());
    }

    auto ranked = beam_search(scorer, 256, max_len);
    struct Seq {
      double score;
      std::vector<int> tokens;
    };
    std::vector<Seq> all;
    auto d0 = scorer.next_distribution(std::vector<int>{0});
    all.push_back({std::log(d0[1]), {0, 1}});
    for (int a = 2; a < vocab; ++a) {
      auto d1 = scorer.next_distribution(std::vector<int>{0, a});
      all.push_back({std::log(d0[a]) + std::log(d1[1]), {0, a, 1}});
      for (int b = 2; b < vocab; ++b)
        all.push_back({std::log(d0[a]) + std::log(d1[b]), {0, a, b}});
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const Seq& x, const Seq& y) { return x.score > y.score; });
    require(ranked.size() == all.size(), "beam missed sequences");
    for (size_t i = 0; i < all.size(); ++i)
      require(std::abs(ranked[i].score - all[i].score) < 1e-12,
              "beam ranking diverged from enumeration");
    require(ranked.front().tokens == all.front().tokens,
            "beam top-1 differs from enumeration");
  }
  return "zh->dialect and en->language decodes exact; beam == enumeration "
         "on 50 toy scorers";
}

// --------------------------------------------------------------------------
// 10. Punctuation round trip and micro P/R/F1.
std::string criterion_punctuation() {
  std::mt19937_64 gen(1234);
  const std::vector<std::string> zh_chars = {
      "\xE4\xBD\xA0", "\xE5\xA5\xBD", "\xE4\xB8\x96", "\xE7\x95\x8C",
      "\xE8\xAF\xB4", "\xE8\xAF\x9D", "\xE5\xA4\xA9", "\xE6\xB0\x94",
      "\xE4\xBB\x8A", "\xE5\xA4\xA9"};
  const std::vector<std::string> en_words = {
      "the",  "quick", "brown", "fox",   "jumps", "over",
      "lazy", "dogs",  "near",  "rivers"};
  const PuncTag marks[] = {PuncTag::kComma, PuncTag::kPeriod,
                           PuncTag::kQuestion, PuncTag::kExclamation};

  int round_trips = 0;
  for (int sentence = 0; sentence < 500; ++sentence) {
    bool chinese = sentence % 2 == 0;
    TaggedText t;
    t.style = chinese ? LanguageStyle::kChineseFullwidth
                      : LanguageStyle::kEnglishHalfwidth;
    int n = uniform_int(gen, 1, 15);
    for (int i = 0; i < n; ++i) {
      const auto& vocab = chinese ? zh_chars : en_words;
      t.tokens.push_back(vocab[uniform_int(gen, 0, 9)]);
      t.tags.push_back(uniform(gen) < 0.25 ? marks[uniform_int(gen, 0, 3)]
                                           : PuncTag::kNone);
    }
    t.tags.back() = marks[uniform_int(gen, 0, 3)];

    std::string text = apply_tags(t);
    StripResult r = strip_punctuation(text, t.style);
    require(r.tagged.tokens == t.tokens && r.tagged.tags == t.tags,
            "round trip failed on: " + text);
    require(apply_tags(r.tagged) == text, "re-apply failed on: " + text);
    ++round_trips;
  }

  // Hand-counted micro example (exclamation excluded from Overall).
  std::vector<PuncTag> ref = {PuncTag::kComma, PuncTag::kPeriod,
                              PuncTag::kExclamation};
  std::vector<PuncTag> hyp = {PuncTag::kComma, PuncTag::kQuestion,
                              PuncTag::kExclamation};
  auto report = punc_prf(ref, hyp);
  require(report.overall.tp == 1 && report.overall.fp == 1 &&
              report.overall.fn == 1,
          "hand-counted overall pool wrong");
  require(report.overall.precision() == 50.0 && report.overall.recall() == 50.0 &&
              report.overall.f1() == 50.0,
          "hand-counted P/R/F1 wrong");

  auto perfect = punc_prf(ref, ref);
  require(perfect.overall.f1() == 100.0, "perfect prediction should be F1 100");
  return std::to_string(round_trips) +
         "/500 sentences round-trip; hand-counted micro scores exact";
}

// --------------------------------------------------------------------------
// 11. End-to-end golden output from the mock component stack.
std::string criterion_golden_pipeline() {
  AudioBuffer audio;
  audio.samples.assign(static_cast<size_t>(5.0 * 16000), 0);

  WindowVoiceDetector vad({{1.0, 2.0}, {3.0, 4.5}});
  ScriptedTranscriber transcriber(
      {{{"\xE4\xBD\xA0", "\xE5\xA5\xBD"},
        {0.9, 0.8},
        std::vector<std::pair<double, double>>{{0.10, 0.30}, {0.30, 0.55}}},
       {{"\xE2\x96\x81he", "llo", "\xE2\x96\x81world"},
        {0.95, 0.85, 0.75},
        std::vector<std::pair<double, double>>{
            {0.05, 0.40}, {0.40, 0.70}, {0.80, 1.30}}}},
      true);
  ScriptedLidIdentifier lid({{"zh", "yue", 0.85}, {"en", std::nullopt, 0.95}});
  FinalPeriodTagger tagger;
  PipelineComponents components{&vad, &transcriber, &lid, &tagger};

  PipelineConfig cfg;
  cfg.vad_post.smooth_window_frames = 1;
  cfg.vad_post.merge_gap_ms = 0;
  cfg.vad_post.pad_ms = 0;

  TranscriptionResult result = transcribe(audio, components, cfg);
  std::string got = result_to_json(result, true) + "\n";

  std::string path = std::string(TEST_DATA_DIR) + "/golden_pipeline.json";
  std::ifstream in(path);
  require(in.good(), "golden file missing: " + path);
  std::string expected((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  require(got == expected, "serialized output differs from the golden file");

  double duration = audio.duration_seconds();
  for (const auto& seg : result.segments) {
    require(seg.start_s >= 0 && seg.end_s <= duration + 1e-9,
            "segment outside the audio");
    require(seg.word_spans.has_value(), "word spans missing");
    for (const auto& w : *seg.word_spans)
      require(w.start_s >= seg.start_s - 1e-9 && w.end_s <= seg.end_s + 1e-9,
              "word span outside its segment");
  }
  // spot-check the offset: first word = segment start + 0.10
  require(std::abs((*result.segments[0].word_spans)[0].start_s -
                   (result.segments[0].start_s + 0.10)) < 1e-9,
          "word span not offset to the original timeline");
  return "byte-identical golden, timestamps bounded, spans offset";
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"parameter budget (default config in [500k, 700k])",
       criterion_parameter_budget},
      {"streaming equivalence (100 chunkings, 1e-5)",
       criterion_streaming_equivalence},
      {"desk-scale VAD training (30 min synthetic, F1 >= 0.95)",
       criterion_training},
      {"CTC alignment equals exhaustive enumeration (1000 instances)",
       criterion_ctc_alignment},
      {"AUC-ROC equals pairwise oracle (100 sets, 1e-9)", criterion_auc},
      {"CER oracle equality and macro-average 2.89", criterion_cer},
      {"segmentation FSM properties (1000 tracks)", criterion_fsm_properties},
      {"geometric confidence examples and invariances", criterion_confidence},
      {"hierarchical LID decoding and beam enumeration", criterion_lid},
      {"punctuation round trip and micro P/R/F1", criterion_punctuation},
      {"end-to-end golden pipeline output", criterion_golden_pipeline},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    std::string status, detail;
    try {
      detail = criteria[i].run();
      status = "PASS";
    } catch (const std::exception& e) {
      detail = e.what();
      status = "FAIL";
      ++failures;
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %zu: %s - %s (%.1fs)\n", status.c_str(), i + 1,
                criteria[i].name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
  }
  if (failures > 0)
    std::printf("%d of %zu criteria FAILED\n", failures, criteria.size());
  else
    std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
