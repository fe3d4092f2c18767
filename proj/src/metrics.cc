#include "speechpipe/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "speechpipe/fbank.h"
#include "speechpipe/utf8.h"

namespace speechpipe {

FrameLabels frame_labels_from_segments(const std::vector<Segment>& segments,
                                       double total_duration_s,
                                       double frame_shift_s,
                                       double frame_len_s) {
  if (total_duration_s < 0)
    throw InvalidArgumentError("total duration must be >= 0");
  for (const auto& s : segments) {
    if (s.end_s <= s.start_s || s.start_s < 0)
      throw InvalidArgumentError("invalid segment [" +
                                 std::to_string(s.start_s) + ", " +
                                 std::to_string(s.end_s) + ")");
    if (s.end_s > total_duration_s + 1e-9)
      throw InvalidArgumentError("segment ends at " + std::to_string(s.end_s) +
                                 "s, beyond audio duration " +
                                 std::to_string(total_duration_s) + "s");
  }

  FrameLabels out;
  out.frame_shift_s = frame_shift_s;
  out.frame_len_s = frame_len_s;
  int64_t t_total = 0;
  if (total_duration_s >= frame_len_s - 1e-12)
    t_total = 1 + static_cast<int64_t>(std::floor(
                  (total_duration_s - frame_len_s) / frame_shift_s + 1e-9));
  out.labels.assign(t_total, 0);
  for (int64_t t = 0; t < t_total; ++t) {
    double center = t * frame_shift_s + frame_len_s / 2.0;
    for (const auto& s : segments) {
      if (center >= s.start_s && center < s.end_s) {
        out.labels[t] = 1;
        break;
      }
    }
  }
  return out;
}

VadFrameReport f1_far_mr(const FrameLabels& pred, const FrameLabels& ref) {
  if (pred.labels.size() != ref.labels.size())
    throw DimensionError("f1_far_mr: " + std::to_string(pred.labels.size()) +
                         " predicted frames vs " +
                         std::to_string(ref.labels.size()) + " reference");
  VadFrameReport r;
  for (size_t i = 0; i < ref.labels.size(); ++i) {
    bool p = pred.labels[i] != 0, g = ref.labels[i] != 0;
    if (p && g) ++r.tp;
    else if (p && !g) ++r.fp;
    else if (!p && g) ++r.fn;
    else ++r.tn;
  }
  r.precision = r.tp + r.fp > 0 ? 100.0 * r.tp / (r.tp + r.fp) : 0.0;
  r.recall = r.tp + r.fn > 0 ? 100.0 * r.tp / (r.tp + r.fn) : 0.0;
  double denom = 2.0 * r.tp + r.fp + r.fn;
  r.f1 = denom > 0 ? 100.0 * 2.0 * r.tp / denom : 0.0;
  r.far = r.fp + r.tn > 0 ? 100.0 * r.fp / (r.fp + r.tn) : 0.0;
  r.mr = r.fn + r.tp > 0 ? 100.0 * r.fn / (r.fn + r.tp) : 0.0;
  return r;
}

double auc_roc(std::span<const double> scores, const FrameLabels& ref) {
  if (scores.size() != ref.labels.size())
    throw DimensionError("auc_roc: score/label length mismatch");
  int64_t n_pos = std::count(ref.labels.begin(), ref.labels.end(), uint8_t{1});
  int64_t n_neg = static_cast<int64_t>(ref.labels.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw InvalidArgumentError(
        "auc_roc is undefined when the reference has a single class");

  // Midranks over the pooled scores.
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(scores.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]])
      ++j;
    double midrank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) rank[order[k]] = midrank;
    i = j + 1;
  }

  double pos_rank_sum = 0.0;
  for (size_t k = 0; k < scores.size(); ++k)
    if (ref.labels[k]) pos_rank_sum += rank[k];
  double u = pos_rank_sum - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
  return 100.0 * u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace {

std::vector<char32_t> cer_units(const std::string& text, const CerOptions& opts) {
  auto cps = utf8_decode(text);
  if (!opts.normalize) return cps;
  std::vector<char32_t> out;
  for (char32_t cp : cps) {
    if (is_ascii_space(cp)) continue;
    switch (cp) {
      case U',': case U'.': case U'?': case U'!':
      case U'，': case U'。': case U'？': case U'！':
        continue;
      default: break;
    }
    if (cp >= U'A' && cp <= U'Z') cp = cp - U'A' + U'a';
    out.push_back(cp);
  }
  return out;
}

int64_t levenshtein(const std::vector<char32_t>& a,
                    const std::vector<char32_t>& b) {
  const size_t n = a.size(), m = b.size();
  std::vector<int64_t> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), int64_t{0});
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int64_t>(i);
    for (size_t j = 1; j <= m; ++j) {
      int64_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace

double cer(const std::string& ref, const std::string& hyp,
           const CerOptions& opts) {
  auto r = cer_units(ref, opts);
  auto h = cer_units(hyp, opts);
  if (r.empty())
    throw InvalidArgumentError("cer: empty reference after unit extraction");
  return 100.0 * static_cast<double>(levenshtein(r, h)) /
         static_cast<double>(r.size());
}

void CerAccumulator::add(const std::string& ref, const std::string& hyp) {
  auto r = cer_units(ref, opts_);
  auto h = cer_units(hyp, opts_);
  if (r.empty())
    throw InvalidArgumentError("cer: empty reference after unit extraction");
  distance_ += levenshtein(r, h);
  ref_units_ += static_cast<int64_t>(r.size());
  ++utterances_;
}

double CerAccumulator::value() const {
  if (ref_units_ == 0)
    throw InvalidArgumentError("cer: no reference units accumulated");
  return 100.0 * static_cast<double>(distance_) /
         static_cast<double>(ref_units_);
}

double macro_average(std::span<const double> values) {
  if (values.empty())
    throw InvalidArgumentError("macro_average: no values");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

PuncPrfReport punc_prf(std::span<const PuncTag> ref_tags,
                       std::span<const PuncTag> hyp_tags) {
  if (ref_tags.size() != hyp_tags.size())
    throw DimensionError("punc_prf: tag sequence length mismatch");

  const PuncTag classes[] = {PuncTag::kComma, PuncTag::kPeriod,
                             PuncTag::kQuestion, PuncTag::kExclamation};
  PuncPrfReport report;
  for (PuncTag c : classes) {
    PrfCounts counts;
    for (size_t i = 0; i < ref_tags.size(); ++i) {
      bool r = ref_tags[i] == c, h = hyp_tags[i] == c;
      if (r && h) ++counts.tp;
      else if (h) ++counts.fp;
      else if (r) ++counts.fn;
    }
    report.per_class[tag_name(c)] = counts;
    // Overall is micro over {comma, period, question}; the exclamation mark
    // is excluded from the pooled score.
    if (c != PuncTag::kExclamation) {
      report.overall.tp += counts.tp;
      report.overall.fp += counts.fp;
      report.overall.fn += counts.fn;
    }
  }
  return report;
}

double lid_accuracy(std::span<const LidResult> refs,
                    std::span<const LidResult> hyps,
                    LidGranularity granularity) {
  if (refs.empty())
    throw InvalidArgumentError("lid_accuracy: empty input");
  if (refs.size() != hyps.size())
    throw DimensionError("lid_accuracy: ref/hyp count mismatch");
  int64_t correct = 0;
  for (size_t i = 0; i < refs.size(); ++i) {
    bool lang_match = refs[i].language == hyps[i].language;
    if (granularity == LidGranularity::kLanguage) {
      correct += lang_match;
    } else {
      correct += lang_match && refs[i].dialect == hyps[i].dialect;
    }
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(refs.size());
}

}  // namespace speechpipe
