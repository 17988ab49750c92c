// Serial vs OpenMP timings for the data-parallel kernels.

#include <chrono>
#include <cstdio>
#include <functional>

#include <omp.h>

#include "osr/batch.hpp"
#include "osr/calibrators.hpp"
#include "osr/data.hpp"
#include "osr/eval.hpp"

using namespace osr;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

int mismatches = 0;

void row(const char* name, double serial, double parallel, bool same) {
  if (!same) ++mismatches;
  std::printf("%-24s %10.2f ms %10.2f ms %7.2fx  %s\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  SyntheticSpec spec;
  spec.num_known = spec.dim = argc > 1 ? std::stoul(argv[1]) : 20;
  spec.samples_per_class = argc > 2 ? std::stoul(argv[2]) : 2000;
  spec.unknown_count = spec.num_known / 2;
  const auto data = generate_synthetic(spec);
  const auto train = apply_split(data.train, data.split);
  const auto test = apply_split(data.test, data.split);

  std::printf("K = %zu, train rows = %zu, test rows = %zu, threads = %d\n\n", spec.num_known,
              train.rows(), test.rows(), omp_get_max_threads());
  std::printf("%-24s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");

  MetaMaxCalibrator mm, mm_s;
  const double mb_s = best_of(3, [&] { mm_s = serial::build_metamax_models(train, 20); });
  const double mb_p = best_of(3, [&] { mm = build_metamax_models(train, 20); });
  row("build_metamax_models", mb_s, mb_p, mm.class_models == mm_s.class_models);

  OpenMaxCalibrator om, om_s;
  const double ob_s = best_of(3, [&] { om_s = serial::build_openmax_models(train, 20); });
  const double ob_p = best_of(3, [&] { om = build_openmax_models(train, 20); });
  row("build_openmax_models", ob_s, ob_p, om.class_models == om_s.class_models);

  for (const auto& [name, cal] : {std::pair<const char*, Calibrator>{"predict_batch metamax", mm},
                                  std::pair<const char*, Calibrator>{"predict_batch openmax", om}}) {
    std::vector<CalibratedOutput> a, b;
    const double s = best_of(3, [&] { a = serial::predict_batch(cal, test); });
    const double p = best_of(3, [&] { b = predict_batch(cal, test); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].probabilities == b[i].probabilities;
    row(name, s, p, same);
  }
  return mismatches == 0 ? 0 : 1;
}
