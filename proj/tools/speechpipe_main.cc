// speechpipe: feature extraction, DFSMN VAD (offline/streaming/multi-label),
// CTC forced alignment, punctuation, mock-backed transcription pipeline, and
// the evaluation harness, behind one command-line tool.
//
// Exit codes: 0 success, 1 domain/data errors, 2 usage errors.

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "speechpipe/binio.h"
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
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw FormatError("cannot write output file: " + out_path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << "\n";
  }
}

json load_json(const std::string& path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::exception& e) {
    throw FormatError("bad JSON in " + path + ": " + e.what());
  }
}

// Layered configuration: documented defaults, then config-file values,
// then explicit flags (applied by the caller after this).
PostprocessConfig postprocess_from_json(const json& j) {
  PostprocessConfig cfg;
  cfg.smooth_window_frames = j.value("smooth_window_frames", cfg.smooth_window_frames);
  cfg.threshold = j.value("threshold", cfg.threshold);
  cfg.min_voice_ms = j.value("min_voice_ms", cfg.min_voice_ms);
  cfg.min_silence_ms = j.value("min_silence_ms", cfg.min_silence_ms);
  cfg.merge_gap_ms = j.value("merge_gap_ms", cfg.merge_gap_ms);
  cfg.pad_ms = j.value("pad_ms", cfg.pad_ms);
  cfg.max_segment_ms = j.value("max_segment_ms", cfg.max_segment_ms);
  return cfg;
}

DfsmnConfig dfsmn_from_json(const json& j, DfsmnConfig cfg = {}) {
  cfg.num_blocks = j.value("num_blocks", cfg.num_blocks);
  cfg.hidden_size = j.value("hidden_size", cfg.hidden_size);
  cfg.proj_size = j.value("proj_size", cfg.proj_size);
  cfg.lookback_order = j.value("lookback_order", cfg.lookback_order);
  cfg.lookahead_order = j.value("lookahead_order", cfg.lookahead_order);
  cfg.stride = j.value("stride", cfg.stride);
  cfg.dropout = j.value("dropout", cfg.dropout);
  cfg.num_outputs = j.value("num_outputs", cfg.num_outputs);
  cfg.input_dim = j.value("input_dim", cfg.input_dim);
  return cfg;
}

AudioBuffer load_audio(const std::string& path, bool resample) {
  AudioBuffer audio = read_wav(path);
  if (resample && audio.sample_rate != 16000)
    audio = resample_linear(audio, 16000);
  return audio;
}

PosteriorTrack vad_forward(const std::string& wav, const std::string& weights,
                           const std::string& cmvn, bool resample) {
  AudioBuffer audio = load_audio(wav, resample);
  DfsmnModel model = load_weights(weights);
  FeatureMatrix feats = compute_fbank(audio);
  if (!cmvn.empty()) feats = apply_cmvn(feats, load_cmvn(cmvn));
  return forward_full(model, feats);
}

struct JsonlRecord {
  std::string id;
  json body;
};

std::vector<JsonlRecord> load_jsonl(const std::string& path) {
  std::vector<JsonlRecord> records;
  std::istringstream in(slurp(path));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw FormatError(path + ":" + std::to_string(n) + ": " + e.what());
    }
    JsonlRecord rec;
    rec.id = j.value("id", std::to_string(n));
    rec.body = std::move(j);
    records.push_back(std::move(rec));
  }
  return records;
}

LanguageStyle style_from_name(const std::string& name) {
  if (name == "zh" || name == "chinese" || name == "chinese_fullwidth")
    return LanguageStyle::kChineseFullwidth;
  if (name == "en" || name == "english" || name == "english_halfwidth")
    return LanguageStyle::kEnglishHalfwidth;
  throw InvalidArgumentError("unknown style: " + name +
                             " (expected zh or en)");
}

// ---------------------------------------------------------------- fbank ----

struct FbankArgs {
  std::string in, out, cmvn, estimate_cmvn_out;
  bool resample = false;
};

int run_fbank(const FbankArgs& args) {
  AudioBuffer audio = load_audio(args.in, args.resample);
  FeatureMatrix feats = compute_fbank(audio);
  if (!args.estimate_cmvn_out.empty()) {
    CmvnStats stats = estimate_cmvn(std::span<const FeatureMatrix>(&feats, 1));
    save_cmvn(stats, args.estimate_cmvn_out);
  }
  if (!args.cmvn.empty()) feats = apply_cmvn(feats, load_cmvn(args.cmvn));
  save_features(feats, args.out);
  std::cerr << "wrote " << feats.num_frames() << " x " << feats.dim()
            << " frames to " << args.out << "\n";
  return 0;
}

// ------------------------------------------------------------ vad / mvad ---

struct VadArgs {
  std::string in, weights, cmvn, out, config, dump_posteriors;
  std::string format = "json";
  double threshold = -1.0;  // <0: keep config value
  bool resample = false;
};

int run_vad(const VadArgs& args, bool multi_label) {
  PostprocessConfig cfg;
  if (!args.config.empty())
    cfg = postprocess_from_json(load_json(args.config));
  if (args.threshold >= 0) cfg.threshold = args.threshold;

  AudioBuffer audio = load_audio(args.in, args.resample);
  PosteriorTrack track =
      vad_forward(args.in, args.weights, args.cmvn, args.resample);
  if (!args.dump_posteriors.empty()) save_track(track, args.dump_posteriors);

  if (multi_label) {
    if (track.num_channels() != 3)
      throw InvalidArgumentError("mvad requires a 3-output model, weights have " +
                                 std::to_string(track.num_channels()));
    if (args.format != "json")
      throw InvalidArgumentError("mvad supports only --format json");
    EventSegments events = mvad_segments(track, cfg);
    std::string text;
    for (const auto& name : mvad_channel_names())
      text += segments_to_jsonl(events.events.at(name));
    emit(text, args.out);
  } else {
    if (track.num_channels() != 1)
      throw InvalidArgumentError("vad requires a 1-output model");
    auto segments = vad_segments(track, cfg, audio.duration_seconds());
    emit(args.format == "tsv" ? segments_to_tsv(segments)
                              : segments_to_jsonl(segments),
         args.out);
  }
  return 0;
}

// --------------------------------------------------------------- stream ----

struct StreamArgs {
  std::string in, weights, cmvn, out, config;
  int chunk_ms = 100;
  bool resample = false;
};

int run_vad_stream(const StreamArgs& args) {
  PostprocessConfig cfg;
  if (!args.config.empty())
    cfg = postprocess_from_json(load_json(args.config));

  AudioBuffer audio = load_audio(args.in, args.resample);
  DfsmnModel model = load_weights(args.weights);
  if (!model.config.causal())
    throw InvalidArgumentError(
        "vad-stream requires causal weights (lookahead_order 0)");
  CmvnStats stats;
  bool have_cmvn = !args.cmvn.empty();
  if (have_cmvn) stats = load_cmvn(args.cmvn);

  FeatureMatrix feats = compute_fbank(audio);
  if (have_cmvn) feats = apply_cmvn(feats, stats);

  StreamState state = init_stream(model);
  StreamingVadFsm fsm(cfg, feats.frame_shift_s);
  const int64_t chunk_frames =
      std::max<int64_t>(1, args.chunk_ms / 10);

  std::string text;
  auto emit_events = [&](const std::vector<StreamEvent>& events) {
    for (const auto& e : events) {
      ordered_json j;
      j["event"] = e.kind == StreamEventKind::kVoiceStart ? "voice_start"
                                                          : "voice_end";
      j["time"] = round_half_up(e.time_s, 6);
      text += j.dump();
      text += "\n";
    }
  };

  // Posterior smoothing is an offline filter; streaming applies the FSM to
  // raw per-frame posteriors as they arrive.
  for (int64_t pos = 0; pos < feats.num_frames(); pos += chunk_frames) {
    int64_t n = std::min(chunk_frames, feats.num_frames() - pos);
    FeatureMatrix chunk;
    chunk.frames = feats.frames.middleRows(pos, n);
    chunk.frame_shift_s = feats.frame_shift_s;
    PosteriorTrack out = forward_streaming(model, state, chunk);
    for (int64_t t = 0; t < out.num_frames(); ++t)
      emit_events(fsm.step(out.values(t, 0)));
  }
  emit_events(fsm.finish());
  emit(text, args.out);
  return 0;
}

// ------------------------------------------------------------- train-vad ---

struct TrainArgs {
  std::string out, cmvn_out, config, report;
  uint64_t seed = 1;
  double minutes = 30.0;
  bool mvad = false;
};

int run_train_vad(const TrainArgs& args) {
  TrainConfig tc;
  tc.model.num_blocks = 3;
  tc.model.hidden_size = 96;
  tc.model.proj_size = 48;
  tc.model.lookback_order = 8;
  tc.model.lookahead_order = 8;
  tc.model.num_outputs = args.mvad ? 3 : 1;
  tc.epochs = 6;
  tc.batch_utterances = 4;

  SynthSpec spec;
  if (!args.config.empty()) {
    json j = load_json(args.config);
    tc.seed = j.value("seed", tc.seed);
    tc.epochs = j.value("epochs", tc.epochs);
    tc.learning_rate = j.value("learning_rate", tc.learning_rate);
    tc.batch_utterances = j.value("batch_utterances", tc.batch_utterances);
    tc.holdout_ratio = j.value("holdout_ratio", tc.holdout_ratio);
    tc.patience = j.value("patience", tc.patience);
    if (j.contains("model")) tc.model = dfsmn_from_json(j["model"], tc.model);
    if (j.contains("synth")) {
      const json& s = j["synth"];
      spec.num_utterances = s.value("num_utterances", spec.num_utterances);
      spec.utterance_seconds =
          s.value("utterance_seconds", spec.utterance_seconds);
      spec.min_region_s = s.value("min_region_s", spec.min_region_s);
      spec.max_region_s = s.value("max_region_s", spec.max_region_s);
    }
  }
  tc.seed = args.seed;
  tc.model.num_outputs = args.mvad ? 3 : 1;

  spec.num_utterances = std::max(
      2, static_cast<int>(std::lround(args.minutes * 60.0 /
                                      spec.utterance_seconds)));

  std::cerr << "generating " << spec.num_utterances << " utterances ("
            << spec.num_utterances * spec.utterance_seconds / 60.0
            << " min), seed " << args.seed << "\n";
  SynthCorpus corpus = generate_synthetic_corpus(args.seed, spec);
  CmvnStats stats;
  auto dataset = corpus_to_dataset(corpus, args.mvad, FbankConfig{}, &stats);

  TrainReport report;
  DfsmnModel model = train_frame_classifier(dataset, tc, &report);
  save_weights(model, args.out);
  if (!args.cmvn_out.empty()) save_cmvn(stats, args.cmvn_out);

  ordered_json r;
  r["best_f1"] = report.best_f1;
  r["best_epoch"] = report.best_epoch;
  r["epoch_loss"] = report.epoch_loss;
  r["epoch_f1"] = report.epoch_f1;
  r["parameters"] = count_parameters(model);
  if (!args.report.empty()) emit(r.dump(2), args.report);
  std::cerr << "best held-out frame F1 " << report.best_f1 << " (epoch "
            << report.best_epoch << "), weights -> " << args.out << "\n";
  return 0;
}

// ----------------------------------------------------------------- align ---

struct AlignArgs {
  std::string logits, tokens, out;
};

int run_align(const AlignArgs& args) {
  CtcFrames frames = load_ctc_logits(args.logits);
  json tokens_json = load_json(args.tokens);
  std::vector<Token> tokens;
  for (const auto& t : tokens_json)
    tokens.push_back({t.at("id").get<int>(), t.at("text").get<std::string>()});

  auto path = forced_align(frames, tokens);
  auto spans = token_timestamps(path, frames, tokens);
  auto words = merge_words(spans);

  ordered_json out;
  out["frame_shift_s"] = frames.frame_shift_s;
  ordered_json token_arr = ordered_json::array();
  for (const auto& s : spans)
    token_arr.push_back({{"id", s.token_id},
                         {"text", s.token_text},
                         {"start", round_half_up(s.start_s, 6)},
                         {"end", round_half_up(s.end_s, 6)}});
  out["tokens"] = token_arr;
  ordered_json word_arr = ordered_json::array();
  for (const auto& w : words)
    word_arr.push_back({{"w", w.word_text},
                        {"start", round_half_up(w.start_s, 6)},
                        {"end", round_half_up(w.end_s, 6)},
                        {"tokens", w.token_indices}});
  out["words"] = word_arr;
  emit(out.dump(2), args.out);
  return 0;
}

// ------------------------------------------------------------ punc-apply ---

struct PuncApplyArgs {
  std::string in, out, style = "zh";
};

int run_punc_apply(const PuncApplyArgs& args) {
  LanguageStyle style = style_from_name(args.style);
  std::string text;
  for (const auto& rec : load_jsonl(args.in)) {
    TaggedText tagged;
    tagged.style = style;
    tagged.tokens = rec.body.at("tokens").get<std::vector<std::string>>();
    for (const auto& name : rec.body.at("tags"))
      tagged.tags.push_back(tag_from_name(name.get<std::string>()));
    text += apply_tags(tagged);
    text += "\n";
  }
  emit(text, args.out);
  return 0;
}

// -------------------------------------------------------------- pipeline ---

struct PipelineArgs {
  std::string in, vad_weights, cmvn, asr_script, lid_script, out, config;
  std::string tagger = "none";
  bool pretty = false;
  bool resample = false;
};

int run_pipeline(const PipelineArgs& args) {
  PipelineConfig cfg;
  if (!args.config.empty()) {
    json j = load_json(args.config);
    if (j.contains("vad_post"))
      cfg.vad_post = postprocess_from_json(j["vad_post"]);
    if (j.contains("punc_style"))
      cfg.punc_style = style_from_name(j["punc_style"].get<std::string>());
  }

  AudioBuffer audio = load_audio(args.in, args.resample);
  DfsmnVoiceDetector vad(load_weights(args.vad_weights), FbankConfig{},
                         load_cmvn(args.cmvn));
  ScriptedTranscriber transcriber =
      ScriptedTranscriber::from_json(slurp(args.asr_script));

  std::optional<ScriptedLidIdentifier> lid;
  if (!args.lid_script.empty())
    lid = ScriptedLidIdentifier::from_json(slurp(args.lid_script));
  FinalPeriodTagger rule_tagger;

  PipelineComponents components;
  components.vad = &vad;
  components.transcriber = &transcriber;
  components.lid = lid ? &*lid : nullptr;
  components.tagger = args.tagger == "rule" ? &rule_tagger : nullptr;

  TranscriptionResult result = transcribe(audio, components, cfg);
  emit(result_to_json(result, args.pretty), args.out);
  return 0;
}

// -------------------------------------------------------------- eval-vad ---

struct EvalVadArgs {
  std::string ref, hyp, scores, out;
  double duration_s = -1.0;
};

int run_eval_vad(const EvalVadArgs& args) {
  auto ref_segs = load_segments(args.ref);
  auto hyp_segs = load_segments(args.hyp);
  double duration = args.duration_s;
  if (duration < 0) {
    for (const auto& s : ref_segs) duration = std::max(duration, s.end_s);
    for (const auto& s : hyp_segs) duration = std::max(duration, s.end_s);
    if (duration < 0) duration = 0;
  }

  FrameLabels ref = frame_labels_from_segments(ref_segs, duration);
  FrameLabels hyp = frame_labels_from_segments(hyp_segs, duration);
  VadFrameReport report = f1_far_mr(hyp, ref);

  ordered_json out;
  out["frames"] = ref.labels.size();
  out["f1"] = round_half_up(report.f1, 2);
  out["far"] = round_half_up(report.far, 2);
  out["mr"] = round_half_up(report.mr, 2);
  out["precision"] = round_half_up(report.precision, 2);
  out["recall"] = round_half_up(report.recall, 2);
  out["counts"] = {{"tp", report.tp}, {"fp", report.fp},
                   {"fn", report.fn}, {"tn", report.tn}};
  if (!args.scores.empty()) {
    PosteriorTrack track = load_track(args.scores);
    if (track.num_frames() != static_cast<Eigen::Index>(ref.labels.size()))
      throw DimensionError(
          "scores dump has " + std::to_string(track.num_frames()) +
          " frames, reference grid has " + std::to_string(ref.labels.size()));
    std::vector<double> scores(track.num_frames());
    for (Eigen::Index t = 0; t < track.num_frames(); ++t)
      scores[t] = track.values(t, 0);
    out["auc_roc"] = round_half_up(auc_roc(scores, ref), 2);
  }
  emit(out.dump(2), args.out);
  return 0;
}

// -------------------------------------------------------------- eval-cer ---

struct EvalCerArgs {
  std::vector<std::string> sets;  // ref.jsonl:hyp.jsonl[:name]
  std::string out;
  bool normalize = false;
  int jobs = 1;
};

int run_eval_cer(const EvalCerArgs& args) {
  struct SetSpec {
    std::string name, ref, hyp;
  };
  std::vector<SetSpec> specs;
  for (const auto& s : args.sets) {
    auto c1 = s.find(':');
    if (c1 == std::string::npos)
      throw InvalidArgumentError("--set expects ref.jsonl:hyp.jsonl[:name]");
    auto c2 = s.find(':', c1 + 1);
    SetSpec spec;
    spec.ref = s.substr(0, c1);
    spec.hyp = c2 == std::string::npos ? s.substr(c1 + 1)
                                       : s.substr(c1 + 1, c2 - c1 - 1);
    spec.name = c2 == std::string::npos ? spec.ref : s.substr(c2 + 1);
    specs.push_back(std::move(spec));
  }

  CerOptions opts;
  opts.normalize = args.normalize;
  std::vector<double> cers(specs.size());
  std::vector<int64_t> counts(specs.size());
  std::vector<std::string> errors(specs.size());

  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (size_t i = cursor.fetch_add(1); i < specs.size();
         i = cursor.fetch_add(1)) {
      try {
        auto refs = load_jsonl(specs[i].ref);
        auto hyps = load_jsonl(specs[i].hyp);
        std::map<std::string, std::string> hyp_by_id;
        for (const auto& h : hyps)
          hyp_by_id[h.id] = h.body.value("text", "");
        CerAccumulator acc(opts);
        for (const auto& r : refs) {
          auto it = hyp_by_id.find(r.id);
          acc.add(r.body.at("text").get<std::string>(),
                  it == hyp_by_id.end() ? "" : it->second);
        }
        cers[i] = acc.value();
        counts[i] = acc.utterances();
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  int jobs = std::max(1, args.jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (size_t i = 0; i < specs.size(); ++i)
    if (!errors[i].empty())
      throw Error("set " + specs[i].name + ": " + errors[i]);

  ordered_json out;
  ordered_json set_arr = ordered_json::array();
  for (size_t i = 0; i < specs.size(); ++i)
    set_arr.push_back({{"name", specs[i].name},
                       {"utterances", counts[i]},
                       {"cer", round_half_up(cers[i], 2)}});
  out["sets"] = set_arr;
  out["macro_cer"] = round_half_up(macro_average(cers), 2);
  emit(out.dump(2), args.out);
  return 0;
}

// ------------------------------------------------------------- eval-punc ---

struct EvalPuncArgs {
  std::string ref, hyp, out, style = "zh";
};

int run_eval_punc(const EvalPuncArgs& args) {
  LanguageStyle style = style_from_name(args.style);
  auto refs = load_jsonl(args.ref);
  auto hyps = load_jsonl(args.hyp);
  if (refs.size() != hyps.size())
    throw DimensionError("eval-punc: " + std::to_string(refs.size()) +
                         " reference lines vs " + std::to_string(hyps.size()) +
                         " hypothesis lines");

  std::vector<PuncTag> ref_tags, hyp_tags;
  int skipped_marks = 0;
  for (size_t i = 0; i < refs.size(); ++i) {
    StripResult stripped =
        strip_punctuation(refs[i].body.at("text").get<std::string>(), style);
    skipped_marks += stripped.unsupported_marks;
    auto tokens = hyps[i].body.at("tokens").get<std::vector<std::string>>();
    if (tokens != stripped.tagged.tokens)
      throw InvalidArgumentError(
          "eval-punc: hypothesis tokens disagree with stripped reference at "
          "line " + std::to_string(i + 1));
    for (const auto& t : stripped.tagged.tags) ref_tags.push_back(t);
    for (const auto& name : hyps[i].body.at("tags"))
      hyp_tags.push_back(tag_from_name(name.get<std::string>()));
  }
  if (ref_tags.size() != hyp_tags.size())
    throw DimensionError("eval-punc: pooled tag lengths disagree");

  PuncPrfReport report = punc_prf(ref_tags, hyp_tags);
  ordered_json out;
  auto dump_counts = [](const PrfCounts& c) {
    return ordered_json{{"precision", round_half_up(c.precision(), 2)},
                        {"recall", round_half_up(c.recall(), 2)},
                        {"f1", round_half_up(c.f1(), 2)},
                        {"tp", c.tp},
                        {"fp", c.fp},
                        {"fn", c.fn}};
  };
  out["overall"] = dump_counts(report.overall);
  ordered_json per_class;
  for (const auto& [name, counts] : report.per_class)
    per_class[name] = dump_counts(counts);
  out["per_class"] = per_class;
  out["unsupported_reference_marks"] = skipped_marks;
  emit(out.dump(2), args.out);
  return 0;
}

// -------------------------------------------------------------- eval-lid ---

struct EvalLidArgs {
  std::string ref, hyp, out;
  std::string granularity = "language";
};

int run_eval_lid(const EvalLidArgs& args) {
  auto parse = [](const std::vector<JsonlRecord>& records) {
    std::map<std::string, LidResult> by_id;
    for (const auto& r : records) {
      LidResult result;
      result.language = r.body.at("language").get<std::string>();
      if (r.body.contains("dialect") && !r.body["dialect"].is_null())
        result.dialect = r.body["dialect"].get<std::string>();
      result.confidence = r.body.value("confidence", 0.0);
      by_id[r.id] = std::move(result);
    }
    return by_id;
  };
  auto refs = parse(load_jsonl(args.ref));
  auto hyps = parse(load_jsonl(args.hyp));

  std::vector<LidResult> ref_list, hyp_list;
  for (const auto& [id, ref] : refs) {
    auto it = hyps.find(id);
    if (it == hyps.end())
      throw InvalidArgumentError("eval-lid: missing hypothesis for id " + id);
    ref_list.push_back(ref);
    hyp_list.push_back(it->second);
  }

  LidGranularity granularity;
  if (args.granularity == "language") granularity = LidGranularity::kLanguage;
  else if (args.granularity == "dialect") granularity = LidGranularity::kDialect;
  else throw InvalidArgumentError("granularity must be language or dialect");

  ordered_json out;
  out["utterances"] = ref_list.size();
  out["granularity"] = args.granularity;
  out["accuracy"] =
      round_half_up(lid_accuracy(ref_list, hyp_list, granularity), 2);
  emit(out.dump(2), args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speech pipeline toolkit: features, DFSMN VAD, CTC alignment, "
               "decoding, punctuation, and evaluation"};
  app.require_subcommand(1);
  app.footer("File formats (weights, dumps, JSONL records, result schema "
             "version 1) are documented in README.md.");

  FbankArgs fbank_args;
  auto* fbank_cmd = app.add_subcommand(
      "fbank", "80-dim log-mel features from a 16 kHz mono WAV");
  fbank_cmd->add_option("--in", fbank_args.in, "input WAV")->required();
  fbank_cmd->add_option("--out", fbank_args.out, "feature dump (SPFB binary)")
      ->required();
  fbank_cmd->add_option("--cmvn", fbank_args.cmvn, "CMVN stats JSON to apply");
  fbank_cmd->add_option("--estimate-cmvn", fbank_args.estimate_cmvn_out,
                        "write per-file CMVN stats JSON here");
  fbank_cmd->add_flag("--resample", fbank_args.resample,
                      "linear-resample non-16k input");

  VadArgs vad_args;
  auto* vad_cmd =
      app.add_subcommand("vad", "offline voice activity segmentation");
  vad_cmd->add_option("--in", vad_args.in, "input WAV")->required();
  vad_cmd->add_option("--weights", vad_args.weights, "DFSMN weights")
      ->required();
  vad_cmd->add_option("--cmvn", vad_args.cmvn, "CMVN stats JSON");
  vad_cmd->add_option("--out", vad_args.out, "output path (default stdout)");
  vad_cmd->add_option("--config", vad_args.config,
                      "post-processing config JSON");
  vad_cmd->add_option("--threshold", vad_args.threshold,
                      "override decision threshold");
  vad_cmd->add_option("--format", vad_args.format, "json|tsv")
      ->check(CLI::IsMember({"json", "tsv"}));
  vad_cmd->add_option("--dump-posteriors", vad_args.dump_posteriors,
                      "write the posterior track (SPPT binary)");
  vad_cmd->add_flag("--resample", vad_args.resample, "resample non-16k input");

  VadArgs mvad_args;
  auto* mvad_cmd = app.add_subcommand(
      "mvad", "multi-label event segmentation (speech, singing, music)");
  mvad_cmd->add_option("--in", mvad_args.in, "input WAV")->required();
  mvad_cmd->add_option("--weights", mvad_args.weights, "3-output DFSMN weights")
      ->required();
  mvad_cmd->add_option("--cmvn", mvad_args.cmvn, "CMVN stats JSON");
  mvad_cmd->add_option("--out", mvad_args.out, "output path");
  mvad_cmd->add_option("--config", mvad_args.config, "post-processing config");
  mvad_cmd->add_option("--threshold", mvad_args.threshold,
                       "override decision threshold");
  mvad_cmd->add_option("--dump-posteriors", mvad_args.dump_posteriors,
                       "write the posterior track");
  mvad_cmd->add_flag("--resample", mvad_args.resample, "resample input");

  StreamArgs stream_args;
  auto* stream_cmd = app.add_subcommand(
      "vad-stream", "streaming VAD demo: chunked inference, start/end events");
  stream_cmd->add_option("--in", stream_args.in, "input WAV")->required();
  stream_cmd->add_option("--weights", stream_args.weights, "causal weights")
      ->required();
  stream_cmd->add_option("--cmvn", stream_args.cmvn, "CMVN stats JSON");
  stream_cmd->add_option("--out", stream_args.out, "output path");
  stream_cmd->add_option("--config", stream_args.config, "FSM config JSON");
  stream_cmd->add_option("--chunk-ms", stream_args.chunk_ms,
                         "chunk size in milliseconds");
  stream_cmd->add_flag("--resample", stream_args.resample, "resample input");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand(
      "train-vad", "train a frame classifier on the synthetic corpus");
  train_cmd->add_option("--out", train_args.out, "output weights path")
      ->required();
  train_cmd->add_option("--cmvn-out", train_args.cmvn_out,
                        "write corpus CMVN stats here");
  train_cmd->add_option("--seed", train_args.seed, "corpus + training seed");
  train_cmd->add_option("--minutes", train_args.minutes,
                        "synthetic audio minutes");
  train_cmd->add_option("--config", train_args.config, "training config JSON");
  train_cmd->add_option("--report", train_args.report, "training report JSON");
  train_cmd->add_flag("--mvad", train_args.mvad,
                      "train the 3-label event model");

  AlignArgs align_args;
  auto* align_cmd = app.add_subcommand(
      "align", "CTC forced alignment from a logits dump");
  align_cmd->add_option("--logits", align_args.logits, "logits dump (SPCL)")
      ->required();
  align_cmd->add_option("--tokens", align_args.tokens,
                        "token JSON [{id, text}, ...]")
      ->required();
  align_cmd->add_option("--out", align_args.out, "span JSON output");

  PuncApplyArgs punc_args;
  auto* punc_cmd = app.add_subcommand(
      "punc-apply", "render tagged tokens into punctuated text");
  punc_cmd->add_option("--in", punc_args.in,
                       "JSONL with {tokens[], tags[]} per line")
      ->required();
  punc_cmd->add_option("--out", punc_args.out, "output path");
  punc_cmd->add_option("--style", punc_args.style, "zh|en punctuation style");

  PipelineArgs pipe_args;
  auto* pipe_cmd = app.add_subcommand(
      "pipeline", "VAD -> LID -> transcription -> punctuation");
  pipe_cmd->add_option("--in", pipe_args.in, "input WAV")->required();
  pipe_cmd->add_option("--vad-weights", pipe_args.vad_weights, "DFSMN weights")
      ->required();
  pipe_cmd->add_option("--cmvn", pipe_args.cmvn, "CMVN stats JSON")->required();
  pipe_cmd->add_option("--asr-script", pipe_args.asr_script,
                       "scripted transcriber JSON")
      ->required();
  pipe_cmd->add_option("--lid-script", pipe_args.lid_script,
                       "scripted LID JSON");
  pipe_cmd->add_option("--tagger", pipe_args.tagger, "rule|none")
      ->check(CLI::IsMember({"rule", "none"}));
  pipe_cmd->add_option("--config", pipe_args.config, "pipeline config JSON");
  pipe_cmd->add_option("--out", pipe_args.out, "output JSON path");
  pipe_cmd->add_flag("--pretty", pipe_args.pretty, "indent the output JSON");
  pipe_cmd->add_flag("--resample", pipe_args.resample, "resample input");

  EvalVadArgs eval_vad_args;
  auto* eval_vad_cmd = app.add_subcommand(
      "eval-vad", "frame-level F1/FAR/MR (and AUC with --scores)");
  eval_vad_cmd->add_option("--ref", eval_vad_args.ref,
                           "reference segments (json|tsv)")
      ->required();
  eval_vad_cmd->add_option("--hyp", eval_vad_args.hyp,
                           "hypothesis segments (json|tsv)")
      ->required();
  eval_vad_cmd->add_option("--duration-s", eval_vad_args.duration_s,
                           "audio duration (default: max segment end)");
  eval_vad_cmd->add_option("--scores", eval_vad_args.scores,
                           "posterior dump for AUC-ROC");
  eval_vad_cmd->add_option("--out", eval_vad_args.out, "report path");

  EvalCerArgs eval_cer_args;
  auto* eval_cer_cmd =
      app.add_subcommand("eval-cer", "character error rate over test sets");
  eval_cer_cmd->add_option("--set", eval_cer_args.sets,
                           "ref.jsonl:hyp.jsonl[:name], repeatable")
      ->required();
  eval_cer_cmd->add_flag("--normalize", eval_cer_args.normalize,
                         "strip spaces/marks, lowercase ASCII first");
  eval_cer_cmd->add_option("--jobs", eval_cer_args.jobs,
                           "parallel workers over sets");
  eval_cer_cmd->add_option("--out", eval_cer_args.out, "report path");

  EvalPuncArgs eval_punc_args;
  auto* eval_punc_cmd = app.add_subcommand(
      "eval-punc", "punctuation micro P/R/F1 against punctuated references");
  eval_punc_cmd->add_option("--ref", eval_punc_args.ref,
                            "reference JSONL {text}")
      ->required();
  eval_punc_cmd->add_option("--hyp", eval_punc_args.hyp,
                            "hypothesis JSONL {tokens[], tags[]}")
      ->required();
  eval_punc_cmd->add_option("--style", eval_punc_args.style, "zh|en");
  eval_punc_cmd->add_option("--out", eval_punc_args.out, "report path");

  EvalLidArgs eval_lid_args;
  auto* eval_lid_cmd =
      app.add_subcommand("eval-lid", "utterance-level LID accuracy");
  eval_lid_cmd->add_option("--ref", eval_lid_args.ref,
                           "reference JSONL {id, language, dialect?}")
      ->required();
  eval_lid_cmd->add_option("--hyp", eval_lid_args.hyp, "hypothesis JSONL")
      ->required();
  eval_lid_cmd->add_option("--granularity", eval_lid_args.granularity,
                           "language|dialect");
  eval_lid_cmd->add_option("--out", eval_lid_args.out, "report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return 2;
  }

  try {
    if (app.got_subcommand(fbank_cmd)) return run_fbank(fbank_args);
    if (app.got_subcommand(vad_cmd)) return run_vad(vad_args, false);
    if (app.got_subcommand(mvad_cmd)) return run_vad(mvad_args, true);
    if (app.got_subcommand(stream_cmd)) return run_vad_stream(stream_args);
    if (app.got_subcommand(train_cmd)) return run_train_vad(train_args);
    if (app.got_subcommand(align_cmd)) return run_align(align_args);
    if (app.got_subcommand(punc_cmd)) return run_punc_apply(punc_args);
    if (app.got_subcommand(pipe_cmd)) return run_pipeline(pipe_args);
    if (app.got_subcommand(eval_vad_cmd)) return run_eval_vad(eval_vad_args);
    if (app.got_subcommand(eval_cer_cmd)) return run_eval_cer(eval_cer_args);
    if (app.got_subcommand(eval_punc_cmd)) return run_eval_punc(eval_punc_args);
    if (app.got_subcommand(eval_lid_cmd)) return run_eval_lid(eval_lid_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
