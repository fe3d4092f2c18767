#include "speechpipe/decode.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace speechpipe {

std::vector<int> Hypothesis::label_tokens(int sos, int eos) const {
  std::vector<int> out;
  for (int id : tokens)
    if (id != sos && id != eos) out.push_back(id);
  return out;
}

namespace {

void check_distribution(const std::vector<double>& dist, int vocab_size) {
  if (static_cast<int>(dist.size()) != vocab_size)
    throw ContractViolation("scorer returned distribution of size " +
                            std::to_string(dist.size()) + ", vocab is " +
                            std::to_string(vocab_size));
  double sum = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ContractViolation("scorer returned a negative or non-finite "
                              "probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw ContractViolation("scorer distribution sums to " +
                            std::to_string(sum) + ", expected 1");
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : -1e30; }

}  // namespace

std::vector<Hypothesis> beam_search(const SequenceScorer& scorer,
                                    int beam_size, int max_len) {
  if (beam_size < 1) throw InvalidArgumentError("beam_size must be >= 1");
  if (max_len < 1) throw InvalidArgumentError("max_len must be >= 1");
  const int sos = scorer.sos_id();
  const int eos = scorer.eos_id();
  const int vocab = scorer.vocab_size();

  std::vector<Hypothesis> live;
  Hypothesis root;
  root.tokens = {sos};
  live.push_back(root);
  std::vector<Hypothesis> finished;

  for (int step = 0; step < max_len && !live.empty(); ++step) {
    std::vector<Hypothesis> expanded;
    for (const auto& hyp : live) {
      std::vector<double> dist = scorer.next_distribution(hyp.tokens);
      check_distribution(dist, vocab);
      for (int id = 0; id < vocab; ++id) {
        if (dist[id] <= 0.0) continue;
        Hypothesis next = hyp;
        next.tokens.push_back(id);
        next.score += safe_log(dist[id]);
        if (id == eos) {
          next.ended = true;
          finished.push_back(std::move(next));
        } else {
          if (id != sos) next.posteriors.push_back(dist[id]);
          expanded.push_back(std::move(next));
        }
      }
    }
    std::stable_sort(expanded.begin(), expanded.end(),
                     [](const Hypothesis& a, const Hypothesis& b) {
                       return a.score > b.score;
                     });
    if (static_cast<int>(expanded.size()) > beam_size)
      expanded.resize(beam_size);
    live = std::move(expanded);
  }
  // Hypotheses that hit max_len end without an eos factor.
  for (auto& hyp : live) finished.push_back(std::move(hyp));

  std::stable_sort(finished.begin(), finished.end(),
                   [](const Hypothesis& a, const Hypothesis& b) {
                     return a.score > b.score;
                   });
  if (static_cast<int>(finished.size()) > beam_size)
    finished.resize(beam_size);
  return finished;
}

ConfidenceResult geometric_confidence(const Hypothesis& hyp,
                                      const ConfidenceConfig& cfg) {
  if (cfg.clip_min < 0 || cfg.clip_min >= cfg.clip_max || cfg.clip_max > 1)
    throw InvalidArgumentError("confidence clip range invalid");

  std::vector<double> logs;
  logs.reserve(hyp.posteriors.size());
  for (double p : hyp.posteriors) logs.push_back(safe_log(p));

  if (cfg.outlier_rule == ConfidenceConfig::OutlierRule::kDropBeyondKSigma &&
      logs.size() >= 2) {
    double mean = 0.0;
    for (double l : logs) mean += l;
    mean /= logs.size();
    double var = 0.0;
    for (double l : logs) var += (l - mean) * (l - mean);
    var /= logs.size();
    double cut = mean - cfg.k_sigma * std::sqrt(var);
    std::vector<double> kept;
    for (double l : logs)
      if (l >= cut) kept.push_back(l);
    if (!kept.empty()) logs = std::move(kept);
  }

  if (logs.empty()) return {0.0, false};
  double mean_log = 0.0;
  for (double l : logs) mean_log += l;
  mean_log /= logs.size();
  double value = std::exp(mean_log);
  return {std::clamp(value, cfg.clip_min, cfg.clip_max), true};
}

LidResult lid_decode(const SequenceScorer& scorer,
                     const LidLabelRegistry& registry, int beam_size) {
  auto ranked = beam_search(scorer, beam_size, /*max_len=*/2);
  if (ranked.empty())
    throw LidDecodeError("lid_decode: beam search returned no hypotheses", {});
  const Hypothesis& best = ranked.front();
  std::vector<int> labels =
      best.label_tokens(scorer.sos_id(), scorer.eos_id());

  if (labels.empty())
    throw LidDecodeError("lid_decode: hypothesis has no label tokens", best);
  if (labels.size() > 2)
    throw LidDecodeError("lid_decode: more than two label tokens", best);
  if (!registry.is_language_token(labels[0]))
    throw LidDecodeError("lid_decode: first token " +
                             std::to_string(labels[0]) +
                             " is not a language code",
                         best);

  LidResult result;
  result.language = registry.code(labels[0]);
  if (labels.size() == 2) {
    if (!registry.is_dialect_token(labels[1]))
      throw LidDecodeError("lid_decode: second token " +
                               std::to_string(labels[1]) +
                               " is not a dialect code",
                           best);
    if (result.language != "zh")
      throw LidDecodeError(
          "lid_decode: dialect token after non-zh language '" +
              result.language + "'",
          best);
    result.dialect = registry.code(labels[1]);
  }
  if (best.posteriors.empty())
    throw LidDecodeError("lid_decode: no posteriors recorded", best);
  double sum = 0.0;
  for (double p : best.posteriors) sum += p;
  result.confidence = sum / best.posteriors.size();
  return result;
}

TableScorer::TableScorer(int vocab_size, int sos, int eos)
    : vocab_size_(vocab_size), sos_(sos), eos_(eos) {
  if (vocab_size < 2 || sos < 0 || sos >= vocab_size || eos < 0 ||
      eos >= vocab_size || sos == eos)
    throw InvalidArgumentError("TableScorer: bad vocab/special ids");
}

void TableScorer::set(const std::vector<int>& emitted,
                      std::vector<double> distribution) {
  table_[emitted] = std::move(distribution);
}

void TableScorer::set_default(std::vector<double> distribution) {
  default_ = std::move(distribution);
}

std::vector<double> TableScorer::next_distribution(
    std::span<const int> prefix) const {
  if (prefix.empty() || prefix.front() != sos_)
    throw ContractViolation("TableScorer: prefix must start with sos");
  std::vector<int> emitted(prefix.begin() + 1, prefix.end());
  auto it = table_.find(emitted);
  if (it != table_.end()) return it->second;
  if (default_) return *default_;
  // Unlisted prefix: deterministically end the sequence.
  std::vector<double> dist(vocab_size_, 0.0);
  dist[eos_] = 1.0;
  return dist;
}

TableScorer TableScorer::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("scorer JSON: ") + e.what());
  }
  TableScorer scorer(j.at("vocab_size").get<int>(), j.value("sos", 0),
                     j.value("eos", 1));
  if (j.contains("table")) {
    for (const auto& [key, value] : j.at("table").items()) {
      std::vector<int> emitted;
      if (!key.empty()) {
        size_t pos = 0;
        while (pos <= key.size()) {
          size_t comma = key.find(',', pos);
          if (comma == std::string::npos) comma = key.size();
          emitted.push_back(std::stoi(key.substr(pos, comma - pos)));
          pos = comma + 1;
        }
      }
      scorer.set(emitted, value.get<std::vector<double>>());
    }
  }
  if (j.contains("default"))
    scorer.set_default(j.at("default").get<std::vector<double>>());
  return scorer;
}

}  // namespace speechpipe
