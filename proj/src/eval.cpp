#include "osr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "osr/error.hpp"
#include "per_class.hpp"

namespace osr {

namespace {

struct ClassCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

ClassCounts count_classes(std::span<const double> scores, const std::vector<bool>& positives) {
  if (scores.size() != positives.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and labels differ in length");
  }
  ClassCounts c;
  for (bool p : positives) (p ? c.positives : c.negatives)++;
  if (c.positives == 0 || c.negatives == 0) {
    throw Error(ErrorCode::kSingleClass, "ROC needs at least one positive and one negative");
  }
  return c;
}

}  // namespace

double auroc(std::span<const double> scores, const std::vector<bool>& positives) {
  const auto counts = count_classes(scores, positives);
  const auto n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of (1-based, tie-averaged) ranks of the positives.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) {
      if (positives[order[t]]) rank_sum += mid_rank;
    }
    i = j + 1;
  }
  const auto np = static_cast<double>(counts.positives);
  const auto nn = static_cast<double>(counts.negatives);
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

RocCurve roc_curve(std::span<const double> scores, const std::vector<bool>& positives) {
  const auto counts = count_classes(scores, positives);
  const auto n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.thresholds.push_back(std::numeric_limits<double>::infinity());
  curve.fpr.push_back(0.0);
  curve.tpr.push_back(0.0);

  const auto np = static_cast<double>(counts.positives);
  const auto nn = static_cast<double>(counts.negatives);
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < n) {
    const double s = scores[order[i]];
    while (i < n && scores[order[i]] == s) {
      (positives[order[i]] ? tp : fp)++;
      ++i;
    }
    curve.thresholds.push_back(s);
    curve.fpr.push_back(static_cast<double>(fp) / nn);
    curve.tpr.push_back(static_cast<double>(tp) / np);
  }

  double area = 0.0;
  for (std::size_t p = 1; p < curve.fpr.size(); ++p) {
    area += (curve.fpr[p] - curve.fpr[p - 1]) * (curve.tpr[p] + curve.tpr[p - 1]) * 0.5;
  }
  curve.auc = area;
  return curve;
}

EvaluationReport evaluate(std::span<const CalibratedOutput> outputs,
                          std::span<const std::int32_t> true_labels, UnknownScore unknown_score) {
  if (outputs.size() != true_labels.size()) {
    std::ostringstream msg;
    msg << outputs.size() << " outputs but " << true_labels.size() << " labels";
    throw Error(ErrorCode::kLengthMismatch, msg.str());
  }
  if (outputs.empty()) throw Error(ErrorCode::kLengthMismatch, "nothing to evaluate");
  const auto k = outputs.front().num_classes();
  for (const auto& o : outputs) {
    if (o.num_classes() != k || o.probabilities.size() != k + 1) {
      throw Error(ErrorCode::kDimensionMismatch, "outputs disagree on the number of classes");
    }
  }

  EvaluationReport report;
  report.num_classes = k;
  report.confusion.assign(k + 1, std::vector<std::size_t>(k + 1, 0));
  std::vector<std::size_t> truth(outputs.size());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto l = true_labels[i];
    if (l == kUnknownLabel) {
      truth[i] = k;
      ++report.n_unknown;
    } else if (l >= 0 && static_cast<std::size_t>(l) < k) {
      truth[i] = static_cast<std::size_t>(l);
      ++report.n_known;
    } else {
      throw Error(ErrorCode::kLabelOutOfRange, "evaluation label outside [0, K) and not -1");
    }
    ++report.confusion[truth[i]][outputs[i].predicted];
  }

  report.per_class_f1.assign(k + 1, 0.0);
  report.f1_undefined.assign(k + 1, false);
  for (std::size_t c = 0; c <= k; ++c) {
    const std::size_t tp = report.confusion[c][c];
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t o = 0; o <= k; ++o) {
      if (o == c) continue;
      fp += report.confusion[o][c];
      fn += report.confusion[c][o];
    }
    const std::size_t denom = 2 * tp + fp + fn;
    if (denom == 0) {
      report.f1_undefined[c] = true;
    } else {
      report.per_class_f1[c] = 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
    }
  }
  report.macro_f1 = std::accumulate(report.per_class_f1.begin(), report.per_class_f1.end(), 0.0) /
                    static_cast<double>(k + 1);

  report.roc_curves.resize(k + 1);
  detail::parallel_for_each_index(k + 1, [&](std::size_t c) {
    std::vector<double> scores(outputs.size());
    std::vector<bool> positives(outputs.size());
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      const auto& p = outputs[i].probabilities;
      if (c == k && unknown_score == UnknownScore::kOneMinusMaxKnown) {
        scores[i] = 1.0 - *std::max_element(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k));
      } else {
        scores[i] = p[c];
      }
      positives[i] = truth[i] == c;
    }
    try {
      auto curve = roc_curve(scores, positives);
      curve.class_index = c;
      report.roc_curves[c] = std::move(curve);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSingleClass) throw;
    }
  });
  if (report.roc_curves[k]) report.auroc_unknown = report.roc_curves[k]->auc;
  return report;
}

ActivationDistancePairs activation_distance_correlation(const ActivationSet& train,
                                                        std::size_t target_class,
                                                        std::size_t probe_class) {
  const auto k = train.num_classes();
  if (target_class >= k || probe_class >= k) {
    throw Error(ErrorCode::kInvalidArgument, "target or probe class outside [0, K)");
  }
  const auto cd = class_distances(train, target_class, DistanceKind::kEuclidean);
  if (cd.distances.size() < 3) {
    std::ostringstream msg;
    msg << "class " << target_class << " has " << cd.distances.size()
        << " rows, at least 3 are needed for a correlation";
    throw Error(ErrorCode::kInsufficientData, msg.str());
  }

  ActivationDistancePairs out;
  out.distances = cd.distances;
  for (std::size_t i = 0; i < train.rows(); ++i) {
    if (train.labels()[i] == static_cast<std::int32_t>(target_class)) {
      out.activations.push_back(train.row(i)[probe_class]);
    }
  }

  const auto n = static_cast<double>(out.activations.size());
  const double mx = std::accumulate(out.activations.begin(), out.activations.end(), 0.0) / n;
  const double my = std::accumulate(out.distances.begin(), out.distances.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < out.activations.size(); ++i) {
    const double dx = out.activations[i] - mx;
    const double dy = out.distances[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const auto constant = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(out.activations) || constant(out.distances) || sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kZeroVariance, "activation or distance column is constant");
  }
  out.correlation = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return out;
}

}  // namespace osr
