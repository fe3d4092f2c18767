#include "speechpipe/vad_post.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "speechpipe/utf8.h"

namespace speechpipe {

namespace {

int64_t ms_to_frames(double ms, double frame_shift_s) {
  // Smallest run length (in frames) whose duration reaches `ms`.
  return static_cast<int64_t>(std::ceil(ms / (frame_shift_s * 1000.0) - 1e-9));
}

int64_t time_to_frame(double t, double frame_shift_s) {
  return static_cast<int64_t>(std::llround(t / frame_shift_s));
}

}  // namespace

void PostprocessConfig::validate() const {
  if (smooth_window_frames < 1 || smooth_window_frames % 2 == 0)
    throw InvalidArgumentError("smooth window must be odd and >= 1");
  if (threshold <= 0.0 || threshold >= 1.0)
    throw InvalidArgumentError("threshold must be in (0,1)");
  if (min_voice_ms < 0 || min_silence_ms < 0 || merge_gap_ms < 0 ||
      pad_ms < 0 || max_segment_ms < 0)
    throw InvalidArgumentError("durations must be >= 0");
}

PosteriorTrack smooth(const PosteriorTrack& track, int window) {
  if (window < 1 || window % 2 == 0)
    throw InvalidArgumentError("smoothing window must be odd and >= 1");
  PosteriorTrack out = track;
  if (window == 1) return out;
  const int h = window / 2;
  const int64_t t_total = track.values.rows();
  for (int64_t t = 0; t < t_total; ++t) {
    int64_t lo = std::max<int64_t>(0, t - h);
    int64_t hi = std::min<int64_t>(t_total - 1, t + h);
    for (Eigen::Index k = 0; k < track.values.cols(); ++k) {
      double acc = 0.0;
      for (int64_t u = lo; u <= hi; ++u) acc += track.values(u, k);
      out.values(t, k) = acc / (hi - lo + 1);
    }
  }
  return out;
}

std::vector<uint8_t> binarize(const PosteriorTrack& track, double threshold,
                              int channel) {
  if (channel < 0 || channel >= track.values.cols())
    throw DimensionError("binarize: channel out of range");
  std::vector<uint8_t> decisions(track.values.rows());
  for (Eigen::Index t = 0; t < track.values.rows(); ++t)
    decisions[t] = track.values(t, channel) >= threshold ? 1 : 0;
  return decisions;
}

StreamingVadFsm::StreamingVadFsm(const PostprocessConfig& cfg,
                                 double frame_shift_s)
    : cfg_(cfg), shift_s_(frame_shift_s) {
  cfg_.validate();
  if (frame_shift_s <= 0)
    throw InvalidArgumentError("frame shift must be positive");
  min_voice_frames_ = ms_to_frames(cfg.min_voice_ms, frame_shift_s);
  min_silence_frames_ = ms_to_frames(cfg.min_silence_ms, frame_shift_s);
}

std::vector<StreamEvent> StreamingVadFsm::step(double frame_posterior) {
  return step_decision(frame_posterior >= cfg_.threshold);
}

std::vector<StreamEvent> StreamingVadFsm::step_decision(bool voiced) {
  std::vector<StreamEvent> events;
  const int64_t t = frame_;
  switch (state_) {
    case State::kSilence:
      if (voiced) {
        run_start_ = t;
        state_ = State::kPendingVoice;
      }
      break;
    case State::kPendingVoice:
      if (!voiced) state_ = State::kSilence;  // run too short, discard
      break;
    case State::kVoice:
      if (!voiced) {
        sil_start_ = t;
        state_ = State::kPendingSilence;
      }
      break;
    case State::kPendingSilence:
      if (voiced) state_ = State::kVoice;  // short gap absorbed
      break;
  }
  if (state_ == State::kPendingVoice && voiced &&
      t - run_start_ + 1 >= min_voice_frames_) {
    state_ = State::kVoice;
    events.push_back({StreamEventKind::kVoiceStart, run_start_ * shift_s_});
  }
  if (state_ == State::kPendingSilence &&
      t - sil_start_ + 1 >= min_silence_frames_) {
    state_ = State::kSilence;
    events.push_back({StreamEventKind::kVoiceEnd, sil_start_ * shift_s_});
  }
  ++frame_;
  return events;
}

std::vector<StreamEvent> StreamingVadFsm::finish() {
  std::vector<StreamEvent> events;
  if (state_ == State::kVoice) {
    events.push_back({StreamEventKind::kVoiceEnd, frame_ * shift_s_});
  } else if (state_ == State::kPendingSilence) {
    events.push_back({StreamEventKind::kVoiceEnd, sil_start_ * shift_s_});
  }
  state_ = State::kSilence;
  return events;
}

std::vector<Segment> segments_from_decisions(const std::vector<uint8_t>& decisions,
                                             const PostprocessConfig& cfg,
                                             double frame_shift_s) {
  // Offline segmentation replays the streaming FSM, so the two modes agree
  // on start/end times by construction.
  StreamingVadFsm fsm(cfg, frame_shift_s);
  std::vector<StreamEvent> events;
  for (uint8_t d : decisions) {
    auto e = fsm.step_decision(d != 0);
    events.insert(events.end(), e.begin(), e.end());
  }
  auto tail = fsm.finish();
  events.insert(events.end(), tail.begin(), tail.end());

  std::vector<Segment> segments;
  for (size_t i = 0; i + 1 < events.size(); i += 2)
    segments.push_back({events[i].time_s, events[i + 1].time_s, "voice"});
  return segments;
}

namespace {

struct FrameView {
  const PosteriorTrack* track;
  double threshold;
  int channel;
  double shift;

  bool voiced(int64_t f) const {
    if (f < 0 || f >= track->values.rows()) return false;
    return track->values(f, channel) >= threshold;
  }
};

// Extension in frames from an anchored boundary over below-threshold frames.
// Idempotency hinges on the anchor test: once a boundary has been moved onto
// a below-threshold frame, later calls extend it by zero.
int64_t pad_extension(const FrameView& view, int64_t boundary_frame,
                      bool leftward, int64_t pad_frames, int64_t room) {
  int64_t anchor = leftward ? boundary_frame : boundary_frame - 1;
  if (!view.voiced(anchor)) return 0;
  int64_t limit = std::min(pad_frames, room);
  int64_t ext = 0;
  while (ext < limit) {
    int64_t next = leftward ? boundary_frame - ext - 1 : boundary_frame + ext;
    if (view.voiced(next)) break;
    ++ext;
  }
  return ext;
}

void split_segment(const Segment& seg, const PostprocessConfig& cfg,
                   const FrameView& view, std::vector<Segment>& out) {
  double len = seg.end_s - seg.start_s;
  if (len <= cfg.max_segment_ms / 1000.0 + 1e-12) {
    out.push_back(seg);
    return;
  }
  // Global minimum of the smoothed posterior inside the middle 60%,
  // earliest frame on ties.
  double w_lo = seg.start_s + 0.2 * len;
  double w_hi = seg.start_s + 0.8 * len;
  int64_t f_lo = static_cast<int64_t>(std::ceil(w_lo / view.shift - 1e-9));
  int64_t f_hi = static_cast<int64_t>(std::floor(w_hi / view.shift + 1e-9));
  f_lo = std::max<int64_t>(f_lo, 0);
  f_hi = std::min<int64_t>(f_hi, view.track->values.rows() - 1);

  double split_time;
  if (f_lo > f_hi) {
    split_time = seg.start_s + len / 2.0;
  } else {
    int64_t best = f_lo;
    double best_val = std::numeric_limits<double>::infinity();
    for (int64_t f = f_lo; f <= f_hi; ++f) {
      double v = view.track->values(f, view.channel);
      if (v < best_val) {
        best_val = v;
        best = f;
      }
    }
    split_time = best * view.shift;
  }
  if (split_time <= seg.start_s || split_time >= seg.end_s)
    split_time = seg.start_s + len / 2.0;
  split_segment({seg.start_s, split_time, seg.label}, cfg, view, out);
  split_segment({split_time, seg.end_s, seg.label}, cfg, view, out);
}

}  // namespace

std::vector<Segment> refine_segments(const std::vector<Segment>& segments,
                                     const PostprocessConfig& cfg,
                                     const PosteriorTrack& track,
                                     double audio_duration_s, int channel) {
  cfg.validate();
  const double shift = track.frame_shift_s;
  if (audio_duration_s < 0) audio_duration_s = track.values.rows() * shift;
  FrameView view{&track, cfg.threshold, channel, shift};

  std::vector<Segment> sorted = segments;
  std::sort(sorted.begin(), sorted.end(),
            [](const Segment& a, const Segment& b) {
              return a.start_s < b.start_s;
            });

  // 1. Merge gaps shorter than merge_gap_ms.
  std::vector<Segment> merged;
  // Strictly-less with a small tolerance so a gap padded down to exactly
  // merge_gap never re-merges on a second pass.
  const double merge_gap_s = cfg.merge_gap_ms / 1000.0 - 1e-9;
  for (const auto& seg : sorted) {
    if (!merged.empty() && seg.start_s - merged.back().end_s < merge_gap_s &&
        seg.label == merged.back().label) {
      merged.back().end_s = std::max(merged.back().end_s, seg.end_s);
    } else {
      merged.push_back(seg);
    }
  }

  // 2. Pad boundaries. Interior gaps keep at least merge_gap so step 1 stays
  // settled on a second pass; the outermost boundaries clamp to the audio.
  const int64_t pad_frames = ms_to_frames(cfg.pad_ms, shift);
  const int64_t merge_gap_frames = ms_to_frames(cfg.merge_gap_ms, shift);
  const int64_t duration_frames =
      static_cast<int64_t>(std::floor(audio_duration_s / shift + 1e-9));
  std::vector<Segment> padded = merged;
  for (size_t i = 0; i < padded.size(); ++i) {
    int64_t start_f = time_to_frame(padded[i].start_s, shift);
    int64_t end_f = time_to_frame(padded[i].end_s, shift);

    int64_t room_left;
    if (i == 0) {
      room_left = start_f;
    } else {
      int64_t gap = start_f - time_to_frame(merged[i - 1].end_s, shift);
      room_left = std::max<int64_t>(0, (gap - merge_gap_frames) / 2);
    }
    int64_t room_right;
    if (i + 1 == padded.size()) {
      room_right = std::max<int64_t>(0, duration_frames - end_f);
    } else {
      int64_t gap = time_to_frame(merged[i + 1].start_s, shift) - end_f;
      room_right = std::max<int64_t>(0, (gap - merge_gap_frames) -
                                            (gap - merge_gap_frames) / 2);
    }

    int64_t ext_l = pad_extension(view, start_f, true, pad_frames, room_left);
    int64_t ext_r = pad_extension(view, end_f, false, pad_frames, room_right);
    if (ext_l > 0) padded[i].start_s = (start_f - ext_l) * shift;
    if (ext_r > 0)
      padded[i].end_s = std::min((end_f + ext_r) * shift, audio_duration_s);
  }

  // 3. Split overly long segments at the posterior dip.
  std::vector<Segment> out;
  for (const auto& seg : padded) split_segment(seg, cfg, view, out);
  return out;
}

std::vector<Segment> vad_segments(const PosteriorTrack& track,
                                  const PostprocessConfig& cfg,
                                  double audio_duration_s) {
  PosteriorTrack smoothed = smooth(track, cfg.smooth_window_frames);
  auto decisions = binarize(smoothed, cfg.threshold, 0);
  auto segs = segments_from_decisions(decisions, cfg, track.frame_shift_s);
  return refine_segments(segs, cfg, smoothed, audio_duration_s, 0);
}

EventSegments mvad_segments(const PosteriorTrack& track,
                            const std::map<std::string, PostprocessConfig>& cfgs) {
  auto expected = mvad_channel_names();
  if (track.channel_names != expected)
    throw InvalidArgumentError(
        "mvad_segments: track channels must be exactly (speech, singing, "
        "music)");
  if (track.values.cols() != 3)
    throw DimensionError("mvad_segments: expected 3 channels");

  EventSegments out;
  for (int c = 0; c < 3; ++c) {
    const std::string& name = expected[c];
    auto it = cfgs.find(name);
    if (it == cfgs.end())
      throw InvalidArgumentError("mvad_segments: missing config for channel '" +
                                 name + "'");
    const PostprocessConfig& cfg = it->second;

    PosteriorTrack ch;
    ch.frame_shift_s = track.frame_shift_s;
    ch.channel_names = {name};
    ch.values = track.values.col(c);
    PosteriorTrack smoothed = smooth(ch, cfg.smooth_window_frames);
    auto decisions = binarize(smoothed, cfg.threshold, 0);
    auto segs = segments_from_decisions(decisions, cfg, track.frame_shift_s);
    segs = refine_segments(segs, cfg, smoothed, -1.0, 0);
    for (auto& s : segs) s.label = name;
    out.events[name] = std::move(segs);
  }
  return out;
}

EventSegments mvad_segments(const PosteriorTrack& track,
                            const PostprocessConfig& shared_cfg) {
  std::map<std::string, PostprocessConfig> cfgs;
  for (const auto& name : mvad_channel_names()) cfgs[name] = shared_cfg;
  return mvad_segments(track, cfgs);
}

namespace {

std::string format_seconds(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", t);
  return buf;
}

}  // namespace

std::string segments_to_jsonl(const std::vector<Segment>& segments) {
  std::string out;
  for (const auto& s : segments) {
    nlohmann::ordered_json j;
    j["start"] = round_half_up(s.start_s, 6);
    j["end"] = round_half_up(s.end_s, 6);
    j["label"] = s.label;
    out += j.dump();
    out += "\n";
  }
  return out;
}

std::string segments_to_tsv(const std::vector<Segment>& segments) {
  std::string out;
  for (const auto& s : segments)
    out += format_seconds(s.start_s) + "\t" + format_seconds(s.end_s) + "\n";
  return out;
}

std::vector<Segment> segments_from_jsonl(const std::string& text) {
  std::vector<Segment> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("segment JSONL: bad line: ") + e.what());
    }
    Segment s;
    s.start_s = j.at("start").get<double>();
    s.end_s = j.at("end").get<double>();
    s.label = j.value("label", "voice");
    out.push_back(s);
  }
  return out;
}

std::vector<Segment> segments_from_tsv(const std::string& text) {
  std::vector<Segment> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    Segment s;
    std::string label;
    if (!(row >> s.start_s >> s.end_s))
      throw FormatError("segment TSV: expected two numeric columns: " + line);
    if (row >> label) s.label = label;
    out.push_back(s);
  }
  return out;
}

std::vector<Segment> load_segments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open segments file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".tsv")
    return segments_from_tsv(text);
  return segments_from_jsonl(text);
}

}  // namespace speechpipe
