#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "speechpipe/dfsmn.h"
#include "speechpipe/types.h"

namespace speechpipe {

struct PostprocessConfig {
  int smooth_window_frames = 5;   // odd
  double threshold = 0.5;         // tie counts as voice (>=)
  double min_voice_ms = 100.0;
  double min_silence_ms = 200.0;
  double merge_gap_ms = 300.0;
  double pad_ms = 100.0;
  double max_segment_ms = 30000.0;

  void validate() const;
};

// Half-open time span on the original waveform timeline: frame t covers
// [t*shift, (t+1)*shift).
struct Segment {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string label = "voice";

  bool operator==(const Segment&) const = default;
};

struct EventSegments {
  std::map<std::string, std::vector<Segment>> events;
};

enum class StreamEventKind { kVoiceStart, kVoiceEnd };

struct StreamEvent {
  StreamEventKind kind;
  double time_s;

  bool operator==(const StreamEvent&) const = default;
};

// Centered moving average per channel; edges shrink to the available frames.
PosteriorTrack smooth(const PosteriorTrack& track, int window);

// decision[t] = (p[t] >= threshold), for the given channel.
std::vector<uint8_t> binarize(const PosteriorTrack& track, double threshold,
                              int channel = 0);

// Duration-constrained hangover FSM: voice runs shorter than min_voice_ms
// are discarded; silence runs shorter than min_silence_ms are absorbed into
// the surrounding open segment.
std::vector<Segment> segments_from_decisions(const std::vector<uint8_t>& decisions,
                                             const PostprocessConfig& cfg,
                                             double frame_shift_s);

// Merge gaps < merge_gap_ms, extend boundaries by up to pad_ms, split
// segments longer than max_segment_ms at the smoothed-posterior minimum
// within the middle 60% of the segment. Idempotent: padding only extends
// boundaries that sit on an above-threshold frame and only over
// below-threshold frames, so re-refining an already refined list is a no-op.
// `track` is the smoothed posterior the segments were derived from;
// `audio_duration_s` < 0 means "use the track extent".
std::vector<Segment> refine_segments(const std::vector<Segment>& segments,
                                     const PostprocessConfig& cfg,
                                     const PosteriorTrack& track,
                                     double audio_duration_s = -1.0,
                                     int channel = 0);

// Full offline chain for one channel: smooth -> binarize -> FSM -> refine.
std::vector<Segment> vad_segments(const PosteriorTrack& track,
                                  const PostprocessConfig& cfg,
                                  double audio_duration_s = -1.0);

// Per-event chain over a (speech, singing, music) track; events may overlap
// across channels.
EventSegments mvad_segments(const PosteriorTrack& track,
                            const std::map<std::string, PostprocessConfig>& cfgs);
EventSegments mvad_segments(const PosteriorTrack& track,
                            const PostprocessConfig& shared_cfg);

// Streaming FSM over per-frame posteriors. voice_start is back-dated to the
// run onset once the run reaches min_voice_ms; voice_end fires at the
// silence onset once the silence reaches min_silence_ms. No refinement in
// streaming mode.
class StreamingVadFsm {
 public:
  StreamingVadFsm(const PostprocessConfig& cfg, double frame_shift_s);

  std::vector<StreamEvent> step(double frame_posterior);
  std::vector<StreamEvent> step_decision(bool voiced);
  // End-of-stream: closes a pending segment, emitting its voice_end.
  std::vector<StreamEvent> finish();

  int64_t frames_consumed() const { return frame_; }

 private:
  enum class State { kSilence, kPendingVoice, kVoice, kPendingSilence };
  PostprocessConfig cfg_;
  double shift_s_;
  int64_t min_voice_frames_;
  int64_t min_silence_frames_;
  State state_ = State::kSilence;
  int64_t frame_ = 0;
  int64_t run_start_ = 0;
  int64_t sil_start_ = 0;
};

// Serialization: JSON lines {"start":..,"end":..,"label":..} and two-column
// seconds TSV. Both are accepted back as reference labels by the metrics CLI.
std::string segments_to_jsonl(const std::vector<Segment>& segments);
std::string segments_to_tsv(const std::vector<Segment>& segments);
std::vector<Segment> segments_from_jsonl(const std::string& text);
std::vector<Segment> segments_from_tsv(const std::string& text);
std::vector<Segment> load_segments(const std::string& path);  // by extension

}  // namespace speechpipe
