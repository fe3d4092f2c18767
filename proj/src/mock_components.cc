#include "speechpipe/mock_components.h"

#include <cmath>

#include "json.hpp"

namespace speechpipe {

WindowVoiceDetector::WindowVoiceDetector(
    std::vector<std::pair<double, double>> windows, double high, double low,
    double frame_shift_s, double frame_len_s)
    : windows_(std::move(windows)),
      high_(high),
      low_(low),
      shift_(frame_shift_s),
      len_(frame_len_s) {}

PosteriorTrack WindowVoiceDetector::posteriors(const AudioBuffer& audio) {
  double duration = audio.duration_seconds();
  int64_t t_total = 0;
  if (duration >= len_ - 1e-12)
    t_total = 1 + static_cast<int64_t>(
                  std::floor((duration - len_) / shift_ + 1e-9));
  PosteriorTrack track;
  track.frame_shift_s = shift_;
  track.channel_names = vad_channel_names();
  track.values.resize(t_total, 1);
  for (int64_t t = 0; t < t_total; ++t) {
    double center = t * shift_ + len_ / 2.0;
    bool inside = false;
    for (const auto& [b, e] : windows_)
      if (center >= b && center < e) {
        inside = true;
        break;
      }
    track.values(t, 0) = inside ? high_ : low_;
  }
  return track;
}

ScriptedTranscriber::ScriptedTranscriber(std::vector<Entry> script,
                                         bool timestamps)
    : script_(std::move(script)), timestamps_(timestamps) {}

TranscriberOutput ScriptedTranscriber::transcribe(const AudioBuffer&) {
  if (calls_ >= static_cast<int>(script_.size()))
    throw ContractViolation("scripted transcriber: script exhausted after " +
                            std::to_string(script_.size()) + " segments");
  const Entry& entry = script_[calls_++];
  TranscriberOutput out;
  out.tokens = entry.tokens;
  out.posteriors = entry.posteriors;
  if (timestamps_ && entry.spans) {
    std::vector<TokenSpan> spans;
    for (size_t i = 0; i < entry.spans->size(); ++i) {
      const auto& [b, e] = (*entry.spans)[i];
      spans.push_back({static_cast<int>(i),
                       i < entry.tokens.size() ? entry.tokens[i] : "",
                       b, e});
    }
    out.spans = std::move(spans);
  }
  return out;
}

ScriptedTranscriber ScriptedTranscriber::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("transcriber script JSON: ") + e.what());
  }
  std::vector<Entry> script;
  for (const auto& u : j.at("utterances")) {
    Entry entry;
    entry.tokens = u.at("tokens").get<std::vector<std::string>>();
    entry.posteriors = u.at("posteriors").get<std::vector<double>>();
    if (u.contains("spans")) {
      std::vector<std::pair<double, double>> spans;
      for (const auto& s : u.at("spans"))
        spans.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
      entry.spans = std::move(spans);
    }
    script.push_back(std::move(entry));
  }
  return ScriptedTranscriber(std::move(script), j.value("timestamps", false));
}

ScriptedLidIdentifier::ScriptedLidIdentifier(std::vector<LidResult> results)
    : results_(std::move(results)) {}

LidResult ScriptedLidIdentifier::identify(const AudioBuffer&) {
  if (calls_ >= static_cast<int>(results_.size()))
    throw ContractViolation("scripted lid: script exhausted");
  return results_[calls_++];
}

ScriptedLidIdentifier ScriptedLidIdentifier::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("lid script JSON: ") + e.what());
  }
  std::vector<LidResult> results;
  for (const auto& r : j.at("results")) {
    LidResult result;
    result.language = r.at("language").get<std::string>();
    if (r.contains("dialect")) result.dialect = r.at("dialect").get<std::string>();
    result.confidence = r.value("confidence", 0.0);
    results.push_back(std::move(result));
  }
  return ScriptedLidIdentifier(std::move(results));
}

std::vector<PuncTag> FinalPeriodTagger::tag(
    const std::vector<std::string>& tokens) {
  std::vector<PuncTag> tags(tokens.size(), PuncTag::kNone);
  if (!tags.empty()) tags.back() = PuncTag::kPeriod;
  return tags;
}

}  // namespace speechpipe
