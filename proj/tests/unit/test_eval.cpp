#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "osr/eval.hpp"
#include "oracles/pair_count.hpp"
#include "support.hpp"

using namespace osr;
using osr::test::error_of;
using Catch::Approx;

namespace {

CalibratedOutput one_hot(std::size_t k, std::size_t predicted) {
  CalibratedOutput out;
  out.probabilities.assign(k + 1, 0.0);
  out.probabilities[predicted] = 1.0;
  out.predicted = predicted;
  out.rejected = predicted == k;
  out.revised_activations.assign(k, 0.0);
  out.modulation.assign(k, 1.0);
  return out;
}

struct Instance {
  std::vector<double> scores;
  std::vector<bool> positives;
};

Instance random_instance(std::mt19937_64& gen, bool ties) {
  std::uniform_int_distribution<std::size_t> size(2, 500);
  const auto n = size(gen);
  Instance inst;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> level(0, 7);
  for (std::size_t i = 0; i < n; ++i) {
    inst.scores.push_back(ties ? level(gen) * 0.25 : u(gen));
    inst.positives.push_back(u(gen) < 0.4);
  }
  inst.positives[0] = true;
  inst.positives[1] = false;
  return inst;
}

}  // namespace

TEST_CASE("auroc examples") {
  CHECK(auroc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, {false, false, true, true}) ==
        Approx(0.75).margin(1e-15));
  CHECK(auroc(std::vector<double>{0.1, 0.2, 0.9, 1.0}, {false, false, true, true}) == 1.0);
  CHECK(auroc(std::vector<double>{3, 3, 3, 3, 3}, {true, false, true, false, false}) == 0.5);
  CHECK(error_of([] { (void)auroc(std::vector<double>{1, 2}, {true, true}); }) ==
        ErrorCode::kSingleClass);
  CHECK(error_of([] { (void)auroc(std::vector<double>{1, 2}, {false, false}); }) ==
        ErrorCode::kSingleClass);
  CHECK(error_of([] { (void)auroc(std::vector<double>{1, 2, 3}, {true, false}); }) ==
        ErrorCode::kLengthMismatch);
}

TEST_CASE("auroc matches pair counting, with and without ties") {
  std::mt19937_64 gen(12);
  for (bool ties : {false, true}) {
    for (int t = 0; t < 50; ++t) {
      const auto inst = random_instance(gen, ties);
      REQUIRE(auroc(inst.scores, inst.positives) ==
              Approx(oracle::pair_count_auroc(inst.scores, inst.positives)).margin(1e-9));
    }
  }
}

TEST_CASE("auroc transform invariance and label swap") {
  std::mt19937_64 gen(13);
  for (int t = 0; t < 50; ++t) {
    const auto inst = random_instance(gen, t % 2 == 0);
    const double a = auroc(inst.scores, inst.positives);
    std::vector<double> transformed;
    for (double s : inst.scores) transformed.push_back(std::exp(3.0 * s) - 7.0);
    REQUIRE(auroc(transformed, inst.positives) == Approx(a).margin(1e-12));
    std::vector<bool> swapped;
    for (bool p : inst.positives) swapped.push_back(!p);
    REQUIRE(auroc(inst.scores, swapped) == Approx(1.0 - a).margin(1e-12));
  }
}

TEST_CASE("roc_curve examples") {
  const auto two = roc_curve(std::vector<double>{1, 0}, {true, false});
  CHECK(two.fpr == std::vector<double>{0, 0, 1});
  CHECK(two.tpr == std::vector<double>{0, 1, 1});
  CHECK(two.auc == 1.0);

  const auto flat = roc_curve(std::vector<double>{2, 2, 2, 2}, {true, false, false, true});
  CHECK(flat.fpr == std::vector<double>{0, 1});
  CHECK(flat.tpr == std::vector<double>{0, 1});
  CHECK(flat.auc == 0.5);
}

TEST_CASE("roc_curve invariants") {
  std::mt19937_64 gen(14);
  for (int t = 0; t < 40; ++t) {
    const auto inst = random_instance(gen, t % 2 == 1);
    const auto c = roc_curve(inst.scores, inst.positives);
    REQUIRE(c.fpr.front() == 0.0);
    REQUIRE(c.tpr.front() == 0.0);
    REQUIRE(c.fpr.back() == 1.0);
    REQUIRE(c.tpr.back() == 1.0);
    double trap = 0.0;
    for (std::size_t i = 1; i < c.fpr.size(); ++i) {
      REQUIRE(c.fpr[i] >= c.fpr[i - 1]);
      REQUIRE(c.tpr[i] >= c.tpr[i - 1]);
      REQUIRE(c.thresholds[i] < c.thresholds[i - 1]);
      trap += (c.fpr[i] - c.fpr[i - 1]) * (c.tpr[i] + c.tpr[i - 1]) / 2.0;
    }
    REQUIRE(c.auc == Approx(trap).margin(1e-12));
    REQUIRE(c.auc == Approx(auroc(inst.scores, inst.positives)).margin(1e-12));
    REQUIRE(c.auc == Approx(oracle::pair_count_auroc(inst.scores, inst.positives)).margin(1e-9));
  }
}

TEST_CASE("evaluate: 3-class toy confusion") {
  const std::size_t k = 3;
  std::vector<CalibratedOutput> outs;
  for (std::size_t p : {0, 0, 1, 2, 3}) outs.push_back(one_hot(k, p));
  const std::vector<std::int32_t> truth{0, 1, 1, 2, -1};
  const auto r = evaluate(outs, truth);
  REQUIRE(r.per_class_f1.size() == 4);
  CHECK(r.per_class_f1[0] == Approx(2.0 / 3.0));
  CHECK(r.per_class_f1[1] == Approx(2.0 / 3.0));
  CHECK(r.per_class_f1[2] == Approx(1.0));
  CHECK(r.per_class_f1[3] == Approx(1.0));
  CHECK(r.macro_f1 == Approx(0.8333).margin(1e-4));
  CHECK(r.n_known == 4);
  CHECK(r.n_unknown == 1);
  std::size_t total = 0;
  for (const auto& row : r.confusion) {
    for (auto v : row) total += v;
  }
  CHECK(total == 5);
  CHECK(r.confusion[1][0] == 1);
  CHECK(r.confusion[3][3] == 1);
  REQUIRE(r.auroc_unknown.has_value());
  CHECK(*r.auroc_unknown == 1.0);
}

TEST_CASE("evaluate: perfect predictions") {
  std::vector<CalibratedOutput> outs;
  for (std::size_t p : {0, 1, 2, 2}) outs.push_back(one_hot(2, p));
  const auto r = evaluate(outs, std::vector<std::int32_t>{0, 1, -1, -1});
  CHECK(r.macro_f1 == 1.0);
  CHECK(r.auroc_unknown == 1.0);
}

TEST_CASE("evaluate: no unknowns leaves AUROC absent, F1 still computed") {
  std::vector<CalibratedOutput> outs;
  for (int i = 0; i < 4; ++i) {
    CalibratedOutput o = one_hot(2, 0);
    o.probabilities = {0.5, 0.5, 0.0};
    outs.push_back(o);
  }
  const auto r = evaluate(outs, std::vector<std::int32_t>{0, 0, 1, 1});
  CHECK_FALSE(r.auroc_unknown.has_value());
  CHECK(r.f1_undefined[2]);
  CHECK(r.per_class_f1[0] == Approx(2.0 / 3.0));
  CHECK(r.per_class_f1[1] == 0.0);
  CHECK(r.macro_f1 == Approx((2.0 / 3.0) / 3.0));
  CHECK_FALSE(r.roc_curves[2].has_value());
  CHECK(error_of([&] { (void)evaluate(outs, std::vector<std::int32_t>{0, 1}); }) ==
        ErrorCode::kLengthMismatch);
}

TEST_CASE("macro-F1 is invariant under relabelling classes") {
  std::mt19937_64 gen(15);
  std::uniform_int_distribution<int> cls(0, 3);
  const std::vector<std::size_t> perm{2, 0, 1};
  for (int t = 0; t < 30; ++t) {
    std::vector<CalibratedOutput> a, b;
    std::vector<std::int32_t> ta, tb;
    for (int i = 0; i < 60; ++i) {
      const auto p = static_cast<std::size_t>(cls(gen));
      const int y = cls(gen);
      a.push_back(one_hot(3, p));
      b.push_back(one_hot(3, p == 3 ? 3 : perm[p]));
      ta.push_back(y == 3 ? -1 : y);
      tb.push_back(y == 3 ? -1 : static_cast<std::int32_t>(perm[static_cast<std::size_t>(y)]));
    }
    REQUIRE(evaluate(a, ta).macro_f1 == Approx(evaluate(b, tb).macro_f1).margin(1e-12));
  }
}

TEST_CASE("activation_distance_correlation") {
  const ActivationSet diag(2, {0, 0, 1, 1, 2, 2}, {0, 0, 0});
  const auto r = activation_distance_correlation(diag, 0, 1);
  CHECK(r.correlation == Approx(0.0).margin(1e-12));
  CHECK(r.activations == std::vector<double>{0, 1, 2});
  CHECK(r.distances[0] == Approx(std::sqrt(2.0)));
  CHECK(r.distances[1] == 0.0);

  const ActivationSet line(2, {0, 5, 1, 5, 3, 5, 0, 0}, {0, 0, 0, 1});
  CHECK(error_of([&] { (void)activation_distance_correlation(line, 0, 1); }) ==
        ErrorCode::kZeroVariance);
  const ActivationSet monotone(2, {0, 0, 1, 1, 3, 3, 9, 9}, {0, 0, 0, 0});
  CHECK(activation_distance_correlation(monotone, 0, 1).correlation > 0.5);
  CHECK(error_of([&] { (void)activation_distance_correlation(line, 1, 0); }) ==
        ErrorCode::kInsufficientData);
  CHECK(error_of([&] { (void)activation_distance_correlation(line, 0, 2); }) ==
        ErrorCode::kInvalidArgument);
}
