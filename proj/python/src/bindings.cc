#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "speechpipe/audio.h"
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

namespace py = pybind11;
using namespace speechpipe;

namespace {

// Trampolines so the pluggable contracts can be implemented in Python.

class PySequenceScorer : public SequenceScorer {
 public:
  int vocab_size() const override {
    PYBIND11_OVERRIDE_PURE(int, SequenceScorer, vocab_size);
  }
  int sos_id() const override {
    PYBIND11_OVERRIDE_PURE(int, SequenceScorer, sos_id);
  }
  int eos_id() const override {
    PYBIND11_OVERRIDE_PURE(int, SequenceScorer, eos_id);
  }
  std::vector<double> next_distribution(
      std::span<const int> prefix) const override {
    py::gil_scoped_acquire gil;
    py::function fn = py::get_override(this, "next_distribution");
    if (!fn)
      throw ContractViolation("scorer must implement next_distribution");
    return fn(std::vector<int>(prefix.begin(), prefix.end()))
        .cast<std::vector<double>>();
  }
};

class PyVoiceDetector : public VoiceDetector {
 public:
  PosteriorTrack posteriors(const AudioBuffer& audio) override {
    PYBIND11_OVERRIDE_PURE(PosteriorTrack, VoiceDetector, posteriors, audio);
  }
};

class PyTranscriber : public Transcriber {
 public:
  TranscriberOutput transcribe(const AudioBuffer& segment) override {
    PYBIND11_OVERRIDE_PURE(TranscriberOutput, Transcriber, transcribe, segment);
  }
  bool supports_timestamps() const override {
    PYBIND11_OVERRIDE_PURE(bool, Transcriber, supports_timestamps);
  }
};

class PyLidIdentifier : public LidIdentifier {
 public:
  LidResult identify(const AudioBuffer& segment) override {
    PYBIND11_OVERRIDE_PURE(LidResult, LidIdentifier, identify, segment);
  }
};

class PyPuncTagger : public PuncTagger {
 public:
  std::vector<PuncTag> tag(const std::vector<std::string>& tokens) override {
    PYBIND11_OVERRIDE_PURE(std::vector<PuncTag>, PuncTagger, tag, tokens);
  }
  bool thread_safe() const override {
    PYBIND11_OVERRIDE(bool, PuncTagger, thread_safe);
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "speech pipeline toolkit: features, DFSMN VAD, CTC alignment, "
            "decoding, punctuation, metrics, and the transcription pipeline";

  py::register_exception<Error>(m, "SpeechPipeError");

  // ------------------------------------------------------------- audio ----
  py::class_<AudioBuffer>(m, "AudioBuffer")
      .def(py::init<>())
      .def_readwrite("samples", &AudioBuffer::samples)
      .def_readwrite("sample_rate", &AudioBuffer::sample_rate)
      .def_readwrite("channel_count", &AudioBuffer::channel_count)
      .def_property_readonly("duration_seconds", &AudioBuffer::duration_seconds);
  m.def("read_wav", &read_wav, py::arg("path"));
  m.def("write_wav", &write_wav, py::arg("audio"), py::arg("path"));
  m.def("resample_linear", &resample_linear, py::arg("audio"),
        py::arg("target_rate"));
  m.def("crop_audio", &crop_audio, py::arg("audio"), py::arg("start_s"),
        py::arg("end_s"));

  // ------------------------------------------------------------- fbank ----
  py::enum_<WindowFunction>(m, "WindowFunction")
      .value("HAMMING", WindowFunction::kHamming)
      .value("POVEY", WindowFunction::kPovey);
  py::class_<FbankConfig>(m, "FbankConfig")
      .def(py::init<>())
      .def_readwrite("num_mels", &FbankConfig::num_mels)
      .def_readwrite("window_ms", &FbankConfig::window_ms)
      .def_readwrite("shift_ms", &FbankConfig::shift_ms)
      .def_readwrite("low_freq_hz", &FbankConfig::low_freq_hz)
      .def_readwrite("high_freq_hz", &FbankConfig::high_freq_hz)
      .def_readwrite("preemphasis", &FbankConfig::preemphasis)
      .def_readwrite("window_function", &FbankConfig::window_function)
      .def_readwrite("log_floor", &FbankConfig::log_floor);
  py::class_<FeatureMatrix>(m, "FeatureMatrix")
      .def(py::init<>())
      .def_readwrite("frames", &FeatureMatrix::frames)
      .def_readwrite("frame_shift_s", &FeatureMatrix::frame_shift_s)
      .def_readwrite("frame_len_s", &FeatureMatrix::frame_len_s);
  m.def("compute_fbank", &compute_fbank, py::arg("audio"),
        py::arg("cfg") = FbankConfig{});
  m.def("frame_count", &frame_count, py::arg("n"), py::arg("w"), py::arg("s"));
  m.def("save_features", &save_features);
  m.def("load_features", &load_features);

  // -------------------------------------------------------------- cmvn ----
  py::class_<CmvnStats>(m, "CmvnStats")
      .def(py::init<>())
      .def_readwrite("mean", &CmvnStats::mean)
      .def_readwrite("variance", &CmvnStats::variance)
      .def_readwrite("frame_count", &CmvnStats::frame_count);
  m.def("estimate_cmvn", [](const std::vector<FeatureMatrix>& corpus) {
    return estimate_cmvn(corpus);
  });
  m.def("apply_cmvn", &apply_cmvn, py::arg("features"), py::arg("stats"));
  m.def("save_cmvn", &save_cmvn);
  m.def("load_cmvn", &load_cmvn);

  // ------------------------------------------------------------- dfsmn ----
  py::class_<DfsmnConfig>(m, "DfsmnConfig")
      .def(py::init<>())
      .def_readwrite("num_blocks", &DfsmnConfig::num_blocks)
      .def_readwrite("hidden_size", &DfsmnConfig::hidden_size)
      .def_readwrite("proj_size", &DfsmnConfig::proj_size)
      .def_readwrite("lookback_order", &DfsmnConfig::lookback_order)
      .def_readwrite("lookahead_order", &DfsmnConfig::lookahead_order)
      .def_readwrite("stride", &DfsmnConfig::stride)
      .def_readwrite("dropout", &DfsmnConfig::dropout)
      .def_readwrite("num_outputs", &DfsmnConfig::num_outputs)
      .def_readwrite("input_dim", &DfsmnConfig::input_dim)
      .def("causal", &DfsmnConfig::causal)
      .def("tap_len", &DfsmnConfig::tap_len);
  py::class_<DfsmnModel>(m, "DfsmnModel")
      .def_readonly("config", &DfsmnModel::config);
  py::class_<PosteriorTrack>(m, "PosteriorTrack")
      .def(py::init<>())
      .def_readwrite("values", &PosteriorTrack::values)
      .def_readwrite("frame_shift_s", &PosteriorTrack::frame_shift_s)
      .def_readwrite("channel_names", &PosteriorTrack::channel_names);
  py::class_<StreamState>(m, "StreamState")
      .def_readonly("frames_consumed", &StreamState::frames_consumed);
  m.def("make_dfsmn", &make_dfsmn<float>, py::arg("cfg"));
  m.def("init_dfsmn", &init_dfsmn, py::arg("cfg"), py::arg("seed"));
  m.def("count_parameters", &count_parameters);
  m.def("forward_full", &forward_full, py::arg("model"), py::arg("features"));
  m.def("init_stream", &init_stream, py::arg("model"));
  m.def("forward_streaming", &forward_streaming, py::arg("model"),
        py::arg("state"), py::arg("chunk"));
  m.def("save_weights", &save_weights);
  m.def("load_weights", &load_weights);
  m.def("save_track", &save_track);
  m.def("load_track", &load_track);

  // ------------------------------------------------------------- train ----
  py::class_<LabeledUtterance>(m, "LabeledUtterance")
      .def(py::init<>())
      .def_readwrite("features", &LabeledUtterance::features)
      .def_readwrite("labels", &LabeledUtterance::labels);
  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("model", &TrainConfig::model)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("batch_utterances", &TrainConfig::batch_utterances)
      .def_readwrite("holdout_ratio", &TrainConfig::holdout_ratio)
      .def_readwrite("patience", &TrainConfig::patience)
      .def_readwrite("eval_threshold", &TrainConfig::eval_threshold);
  py::class_<TrainReport>(m, "TrainReport")
      .def(py::init<>())
      .def_readonly("best_f1", &TrainReport::best_f1)
      .def_readonly("best_epoch", &TrainReport::best_epoch)
      .def_readonly("epoch_loss", &TrainReport::epoch_loss)
      .def_readonly("epoch_f1", &TrainReport::epoch_f1);
  m.def(
      "train_frame_classifier",
      [](const std::vector<LabeledUtterance>& dataset, const TrainConfig& cfg) {
        TrainReport report;
        DfsmnModel model = train_frame_classifier(dataset, cfg, &report);
        return py::make_tuple(model, report);
      },
      py::arg("dataset"), py::arg("cfg"));
  m.def("frame_f1",
        [](const DfsmnModel& model, const std::vector<LabeledUtterance>& data,
           double threshold) { return frame_f1(model, data, threshold); });

  // ------------------------------------------------------------- synth ----
  py::enum_<RegionKind>(m, "RegionKind")
      .value("SILENCE", RegionKind::kSilence)
      .value("NOISE", RegionKind::kNoise)
      .value("SPEECH", RegionKind::kSpeech)
      .value("SINGING", RegionKind::kSinging)
      .value("MUSIC", RegionKind::kMusic);
  py::class_<SynthSpec>(m, "SynthSpec")
      .def(py::init<>())
      .def_readwrite("num_utterances", &SynthSpec::num_utterances)
      .def_readwrite("utterance_seconds", &SynthSpec::utterance_seconds)
      .def_readwrite("min_region_s", &SynthSpec::min_region_s)
      .def_readwrite("max_region_s", &SynthSpec::max_region_s)
      .def_readwrite("sample_rate", &SynthSpec::sample_rate);
  py::class_<SynthRegion>(m, "SynthRegion")
      .def_readonly("kind", &SynthRegion::kind)
      .def_readonly("start_s", &SynthRegion::start_s)
      .def_readonly("end_s", &SynthRegion::end_s);
  py::class_<SynthUtterance>(m, "SynthUtterance")
      .def_readonly("audio", &SynthUtterance::audio)
      .def_readonly("regions", &SynthUtterance::regions);
  py::class_<SynthCorpus>(m, "SynthCorpus")
      .def_readonly("utterances", &SynthCorpus::utterances);
  m.def("generate_synthetic_corpus", &generate_synthetic_corpus,
        py::arg("seed"), py::arg("spec") = SynthSpec{});
  m.def(
      "corpus_to_dataset",
      [](const SynthCorpus& corpus, bool multi_label, const FbankConfig& cfg) {
        CmvnStats stats;
        auto dataset = corpus_to_dataset(corpus, multi_label, cfg, &stats);
        return py::make_tuple(dataset, stats);
      },
      py::arg("corpus"), py::arg("multi_label") = false,
      py::arg("fbank_cfg") = FbankConfig{});

  // ---------------------------------------------------------- vad_post ----
  py::class_<PostprocessConfig>(m, "PostprocessConfig")
      .def(py::init<>())
      .def_readwrite("smooth_window_frames",
                     &PostprocessConfig::smooth_window_frames)
      .def_readwrite("threshold", &PostprocessConfig::threshold)
      .def_readwrite("min_voice_ms", &PostprocessConfig::min_voice_ms)
      .def_readwrite("min_silence_ms", &PostprocessConfig::min_silence_ms)
      .def_readwrite("merge_gap_ms", &PostprocessConfig::merge_gap_ms)
      .def_readwrite("pad_ms", &PostprocessConfig::pad_ms)
      .def_readwrite("max_segment_ms", &PostprocessConfig::max_segment_ms);
  py::class_<Segment>(m, "Segment")
      .def(py::init<>())
      .def(py::init([](double start, double end, const std::string& label) {
             return Segment{start, end, label};
           }),
           py::arg("start_s"), py::arg("end_s"), py::arg("label") = "voice")
      .def_readwrite("start_s", &Segment::start_s)
      .def_readwrite("end_s", &Segment::end_s)
      .def_readwrite("label", &Segment::label)
      .def("__repr__", [](const Segment& s) {
        return "Segment(" + std::to_string(s.start_s) + ", " +
               std::to_string(s.end_s) + ", '" + s.label + "')";
      });
  py::class_<EventSegments>(m, "EventSegments")
      .def_readonly("events", &EventSegments::events);
  py::enum_<StreamEventKind>(m, "StreamEventKind")
      .value("VOICE_START", StreamEventKind::kVoiceStart)
      .value("VOICE_END", StreamEventKind::kVoiceEnd);
  py::class_<StreamEvent>(m, "StreamEvent")
      .def_readonly("kind", &StreamEvent::kind)
      .def_readonly("time_s", &StreamEvent::time_s);
  py::class_<StreamingVadFsm>(m, "StreamingVadFsm")
      .def(py::init<const PostprocessConfig&, double>(), py::arg("cfg"),
           py::arg("frame_shift_s"))
      .def("step", &StreamingVadFsm::step)
      .def("step_decision", &StreamingVadFsm::step_decision)
      .def("finish", &StreamingVadFsm::finish)
      .def_property_readonly("frames_consumed",
                             &StreamingVadFsm::frames_consumed);
  m.def("smooth", &smooth, py::arg("track"), py::arg("window"));
  m.def(
      "binarize",
      [](const PosteriorTrack& track, double threshold, int channel) {
        auto d = binarize(track, threshold, channel);
        return std::vector<int>(d.begin(), d.end());
      },
      py::arg("track"), py::arg("threshold"), py::arg("channel") = 0);
  m.def(
      "segments_from_decisions",
      [](const std::vector<int>& decisions, const PostprocessConfig& cfg,
         double shift) {
        std::vector<uint8_t> d(decisions.begin(), decisions.end());
        return segments_from_decisions(d, cfg, shift);
      },
      py::arg("decisions"), py::arg("cfg"), py::arg("frame_shift_s"));
  m.def("refine_segments", &refine_segments, py::arg("segments"),
        py::arg("cfg"), py::arg("track"), py::arg("audio_duration_s") = -1.0,
        py::arg("channel") = 0);
  m.def("vad_segments", &vad_segments, py::arg("track"), py::arg("cfg"),
        py::arg("audio_duration_s") = -1.0);
  m.def("mvad_segments",
        py::overload_cast<const PosteriorTrack&,
                          const std::map<std::string, PostprocessConfig>&>(
            &mvad_segments),
        py::arg("track"), py::arg("configs"));
  m.def("mvad_segments",
        py::overload_cast<const PosteriorTrack&, const PostprocessConfig&>(
            &mvad_segments),
        py::arg("track"), py::arg("cfg"));
  m.def("segments_to_jsonl", &segments_to_jsonl);
  m.def("segments_from_jsonl", &segments_from_jsonl);
  m.def("segments_to_tsv", &segments_to_tsv);
  m.def("segments_from_tsv", &segments_from_tsv);

  // --------------------------------------------------------- ctc_align ----
  py::class_<CtcFrames>(m, "CtcFrames")
      .def(py::init<>())
      .def_readwrite("log_probs", &CtcFrames::log_probs)
      .def_readwrite("blank_id", &CtcFrames::blank_id)
      .def_readwrite("frame_shift_s", &CtcFrames::frame_shift_s);
  py::class_<Token>(m, "Token")
      .def(py::init<>())
      .def(py::init([](int id, const std::string& text) {
             return Token{id, text};
           }),
           py::arg("id"), py::arg("text"))
      .def_readwrite("id", &Token::id)
      .def_readwrite("text", &Token::text);
  py::class_<TokenSpan>(m, "TokenSpan")
      .def(py::init<>())
      .def(py::init([](int id, const std::string& text, double start,
                       double end) {
             return TokenSpan{id, text, start, end};
           }),
           py::arg("token_id"), py::arg("token_text"), py::arg("start_s"),
           py::arg("end_s"))
      .def_readwrite("token_id", &TokenSpan::token_id)
      .def_readwrite("token_text", &TokenSpan::token_text)
      .def_readwrite("start_s", &TokenSpan::start_s)
      .def_readwrite("end_s", &TokenSpan::end_s);
  py::class_<WordSpan>(m, "WordSpan")
      .def_readonly("word_text", &WordSpan::word_text)
      .def_readonly("start_s", &WordSpan::start_s)
      .def_readonly("end_s", &WordSpan::end_s)
      .def_readonly("token_indices", &WordSpan::token_indices);
  m.def("forced_align",
        [](const CtcFrames& frames, const std::vector<Token>& tokens) {
          return forced_align(frames, tokens);
        });
  m.def("path_log_prob",
        [](const CtcFrames& frames, const std::vector<Token>& tokens,
           const std::vector<int>& path) {
          return path_log_prob(frames, tokens, path);
        });
  m.def("token_timestamps",
        [](const std::vector<int>& path, const CtcFrames& frames,
           const std::vector<Token>& tokens) {
          return token_timestamps(path, frames, tokens);
        });
  m.def("merge_words", [](const std::vector<TokenSpan>& spans) {
    return merge_words(spans);
  });
  m.def("merge_word_texts", [](const std::vector<std::string>& tokens) {
    return merge_word_texts(tokens);
  });
  m.def("save_ctc_logits", &save_ctc_logits);
  m.def("load_ctc_logits", &load_ctc_logits);

  // ------------------------------------------------------------ decode ----
  py::class_<SequenceScorer, PySequenceScorer>(m, "SequenceScorer")
      .def(py::init<>());
  py::class_<Hypothesis>(m, "Hypothesis")
      .def(py::init<>())
      .def_readwrite("tokens", &Hypothesis::tokens)
      .def_readwrite("posteriors", &Hypothesis::posteriors)
      .def_readwrite("score", &Hypothesis::score)
      .def_readwrite("ended", &Hypothesis::ended);
  py::class_<ConfidenceConfig> confidence_cfg(m, "ConfidenceConfig");
  py::enum_<ConfidenceConfig::OutlierRule>(confidence_cfg, "OutlierRule")
      .value("NONE", ConfidenceConfig::OutlierRule::kNone)
      .value("DROP_BEYOND_K_SIGMA",
             ConfidenceConfig::OutlierRule::kDropBeyondKSigma);
  confidence_cfg.def(py::init<>())
      .def_readwrite("clip_min", &ConfidenceConfig::clip_min)
      .def_readwrite("clip_max", &ConfidenceConfig::clip_max)
      .def_readwrite("outlier_rule", &ConfidenceConfig::outlier_rule)
      .def_readwrite("k_sigma", &ConfidenceConfig::k_sigma);
  py::class_<ConfidenceResult>(m, "ConfidenceResult")
      .def_readonly("value", &ConfidenceResult::value)
      .def_readonly("has_tokens", &ConfidenceResult::has_tokens);
  py::class_<LidLabelRegistry>(m, "LidLabelRegistry")
      .def_static("standard", &LidLabelRegistry::standard,
                  py::return_value_policy::reference)
      .def("vocab_size", &LidLabelRegistry::vocab_size)
      .def("sos_id", &LidLabelRegistry::sos_id)
      .def("eos_id", &LidLabelRegistry::eos_id)
      .def("token_id", &LidLabelRegistry::token_id)
      .def("code", &LidLabelRegistry::code,
           py::return_value_policy::reference)
      .def("is_language_token", &LidLabelRegistry::is_language_token)
      .def("is_dialect_token", &LidLabelRegistry::is_dialect_token)
      .def("num_languages",
           [](const LidLabelRegistry& r) { return r.languages().size(); })
      .def("num_dialects",
           [](const LidLabelRegistry& r) { return r.dialects().size(); })
      .def("to_json", &LidLabelRegistry::to_json);
  py::class_<LidResult>(m, "LidResult")
      .def(py::init<>())
      .def(py::init([](const std::string& language,
                       std::optional<std::string> dialect, double confidence) {
             return LidResult{language, std::move(dialect), confidence};
           }),
           py::arg("language"), py::arg("dialect") = std::nullopt,
           py::arg("confidence") = 0.0)
      .def_readwrite("language", &LidResult::language)
      .def_readwrite("dialect", &LidResult::dialect)
      .def_readwrite("confidence", &LidResult::confidence);
  py::class_<TableScorer, SequenceScorer>(m, "TableScorer")
      .def(py::init<int, int, int>(), py::arg("vocab_size"), py::arg("sos"),
           py::arg("eos"))
      .def_static("from_json", &TableScorer::from_json)
      .def("set", &TableScorer::set)
      .def("set_default", &TableScorer::set_default);
  m.def("beam_search", &beam_search, py::arg("scorer"), py::arg("beam_size"),
        py::arg("max_len"));
  m.def("geometric_confidence", &geometric_confidence, py::arg("hypothesis"),
        py::arg("cfg") = ConfidenceConfig{});
  m.def("lid_decode", &lid_decode, py::arg("scorer"), py::arg("registry"),
        py::arg("beam_size") = 4);

  // -------------------------------------------------------------- punc ----
  py::enum_<PuncTag>(m, "PuncTag")
      .value("NONE", PuncTag::kNone)
      .value("COMMA", PuncTag::kComma)
      .value("PERIOD", PuncTag::kPeriod)
      .value("QUESTION", PuncTag::kQuestion)
      .value("EXCLAMATION", PuncTag::kExclamation);
  py::enum_<LanguageStyle>(m, "LanguageStyle")
      .value("CHINESE_FULLWIDTH", LanguageStyle::kChineseFullwidth)
      .value("ENGLISH_HALFWIDTH", LanguageStyle::kEnglishHalfwidth);
  py::class_<TaggedText>(m, "TaggedText")
      .def(py::init<>())
      .def_readwrite("tokens", &TaggedText::tokens)
      .def_readwrite("tags", &TaggedText::tags)
      .def_readwrite("style", &TaggedText::style);
  py::class_<PuncTagger, PyPuncTagger>(m, "PuncTagger").def(py::init<>());
  py::class_<StripResult>(m, "StripResult")
      .def_readonly("tagged", &StripResult::tagged)
      .def_readonly("dropped_marks", &StripResult::dropped_marks)
      .def_readonly("unsupported_marks", &StripResult::unsupported_marks);
  m.def("apply_tags", &apply_tags, py::arg("tagged"));
  m.def("strip_punctuation", &strip_punctuation, py::arg("text"),
        py::arg("style"));
  m.def("tag", &tag, py::arg("tagger"), py::arg("tokens"));

  // ----------------------------------------------------------- metrics ----
  py::class_<FrameLabels>(m, "FrameLabels")
      .def(py::init<>())
      .def_property(
          "labels",
          [](const FrameLabels& f) {
            return std::vector<int>(f.labels.begin(), f.labels.end());
          },
          [](FrameLabels& f, const std::vector<int>& v) {
            f.labels.assign(v.begin(), v.end());
          })
      .def_readwrite("frame_shift_s", &FrameLabels::frame_shift_s)
      .def_readwrite("frame_len_s", &FrameLabels::frame_len_s);
  py::class_<VadFrameReport>(m, "VadFrameReport")
      .def_readonly("f1", &VadFrameReport::f1)
      .def_readonly("far", &VadFrameReport::far)
      .def_readonly("mr", &VadFrameReport::mr)
      .def_readonly("precision", &VadFrameReport::precision)
      .def_readonly("recall", &VadFrameReport::recall)
      .def_readonly("tp", &VadFrameReport::tp)
      .def_readonly("fp", &VadFrameReport::fp)
      .def_readonly("fn", &VadFrameReport::fn)
      .def_readonly("tn", &VadFrameReport::tn);
  py::class_<PrfCounts>(m, "PrfCounts")
      .def_readonly("tp", &PrfCounts::tp)
      .def_readonly("fp", &PrfCounts::fp)
      .def_readonly("fn", &PrfCounts::fn)
      .def("precision", &PrfCounts::precision)
      .def("recall", &PrfCounts::recall)
      .def("f1", &PrfCounts::f1);
  py::class_<PuncPrfReport>(m, "PuncPrfReport")
      .def_readonly("per_class", &PuncPrfReport::per_class)
      .def_readonly("overall", &PuncPrfReport::overall);
  py::enum_<LidGranularity>(m, "LidGranularity")
      .value("LANGUAGE", LidGranularity::kLanguage)
      .value("DIALECT", LidGranularity::kDialect);
  py::class_<CerOptions>(m, "CerOptions")
      .def(py::init<>())
      .def_readwrite("normalize", &CerOptions::normalize);
  m.def("frame_labels_from_segments", &frame_labels_from_segments,
        py::arg("segments"), py::arg("total_duration_s"),
        py::arg("frame_shift_s") = 0.010, py::arg("frame_len_s") = 0.025);
  m.def("f1_far_mr", &f1_far_mr, py::arg("pred"), py::arg("ref"));
  m.def("auc_roc", [](const std::vector<double>& scores,
                      const FrameLabels& ref) { return auc_roc(scores, ref); });
  m.def("cer", &cer, py::arg("ref"), py::arg("hyp"),
        py::arg("opts") = CerOptions{});
  m.def("macro_average", [](const std::vector<double>& values) {
    return macro_average(values);
  });
  m.def("punc_prf",
        [](const std::vector<PuncTag>& ref, const std::vector<PuncTag>& hyp) {
          return punc_prf(ref, hyp);
        });
  m.def("lid_accuracy",
        [](const std::vector<LidResult>& refs,
           const std::vector<LidResult>& hyps, LidGranularity granularity) {
          return lid_accuracy(refs, hyps, granularity);
        });
  m.def("round_half_up", &round_half_up, py::arg("value"), py::arg("decimals"));

  // ---------------------------------------------------------- pipeline ----
  py::class_<VoiceDetector, PyVoiceDetector>(m, "VoiceDetector")
      .def(py::init<>());
  py::class_<DfsmnVoiceDetector, VoiceDetector>(m, "DfsmnVoiceDetector")
      .def(py::init<DfsmnModel, FbankConfig, CmvnStats>(), py::arg("model"),
           py::arg("fbank_cfg"), py::arg("cmvn_stats"))
      .def("posteriors", &DfsmnVoiceDetector::posteriors);
  py::class_<LidIdentifier, PyLidIdentifier>(m, "LidIdentifier")
      .def(py::init<>());
  py::class_<TranscriberOutput>(m, "TranscriberOutput")
      .def(py::init<>())
      .def_readwrite("tokens", &TranscriberOutput::tokens)
      .def_readwrite("posteriors", &TranscriberOutput::posteriors)
      .def_readwrite("spans", &TranscriberOutput::spans);
  py::class_<Transcriber, PyTranscriber>(m, "Transcriber").def(py::init<>());
  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("vad_post", &PipelineConfig::vad_post)
      .def_readwrite("confidence", &PipelineConfig::confidence)
      .def_readwrite("punc_style", &PipelineConfig::punc_style);
  py::class_<SegmentResult>(m, "SegmentResult")
      .def_readonly("start_s", &SegmentResult::start_s)
      .def_readonly("end_s", &SegmentResult::end_s)
      .def_readonly("text", &SegmentResult::text)
      .def_readonly("asr_confidence", &SegmentResult::asr_confidence)
      .def_readonly("language", &SegmentResult::language)
      .def_readonly("dialect", &SegmentResult::dialect)
      .def_readonly("lid_confidence", &SegmentResult::lid_confidence)
      .def_readonly("word_spans", &SegmentResult::word_spans);
  py::class_<SentenceSpan>(m, "SentenceSpan")
      .def_readonly("text", &SentenceSpan::text)
      .def_readonly("start_s", &SentenceSpan::start_s)
      .def_readonly("end_s", &SentenceSpan::end_s);
  py::class_<TranscriptionResult>(m, "TranscriptionResult")
      .def_readonly("text", &TranscriptionResult::text)
      .def_readonly("segments", &TranscriptionResult::segments)
      .def_readonly("vad_segments", &TranscriptionResult::vad_segments)
      .def_readonly("sentences", &TranscriptionResult::sentences)
      .def_readonly("audio_duration_s", &TranscriptionResult::audio_duration_s)
      .def_readonly("sample_rate", &TranscriptionResult::sample_rate);
  m.def(
      "transcribe",
      [](const AudioBuffer& audio, VoiceDetector* vad, Transcriber* transcriber,
         LidIdentifier* lid, PuncTagger* tagger, const PipelineConfig& cfg) {
        PipelineComponents components{vad, transcriber, lid, tagger};
        return transcribe(audio, components, cfg);
      },
      py::arg("audio"), py::arg("vad"), py::arg("transcriber"),
      py::arg("lid") = nullptr, py::arg("tagger") = nullptr,
      py::arg("cfg") = PipelineConfig{});
  m.def("sentence_timestamps", &sentence_timestamps, py::arg("word_spans"),
        py::arg("tags"), py::arg("style"));
  m.def("result_to_json", &result_to_json, py::arg("result"),
        py::arg("pretty") = false);

  // mock components, usable from python as well
  py::class_<WindowVoiceDetector, VoiceDetector>(m, "WindowVoiceDetector")
      .def(py::init<std::vector<std::pair<double, double>>, double, double,
                    double, double>(),
           py::arg("windows"), py::arg("high") = 0.95, py::arg("low") = 0.05,
           py::arg("frame_shift_s") = 0.010, py::arg("frame_len_s") = 0.025);
  py::class_<ScriptedTranscriber, Transcriber>(m, "ScriptedTranscriber")
      .def_static("from_json", &ScriptedTranscriber::from_json);
  py::class_<ScriptedLidIdentifier, LidIdentifier>(m, "ScriptedLidIdentifier")
      .def_static("from_json", &ScriptedLidIdentifier::from_json);
  py::class_<FinalPeriodTagger, PuncTagger>(m, "FinalPeriodTagger")
      .def(py::init<>());
}
