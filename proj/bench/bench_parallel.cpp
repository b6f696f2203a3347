// Serial reference vs OpenMP kernels: kappa_r sweep and Gaussian-bound oracle.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>

#include "qng/fock.hpp"
#include "qng/parallel.hpp"
#include "qng/sweep.hpp"

namespace {

// Best of `reps` wall-clock runs.
double seconds(const std::function<void()>& f, int reps = 5) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main() {
  std::printf("threads: %d\n", qng::thread_count());

  qng::Scenario sc;
  sc.params = {0.32, 0.05, 1.0};
  sc.sweep = {"kappa_r", 0.05, 3.0, 100, qng::Scale::Linear};
  std::vector<qng::SweepRow> serial, parallel;
  const double ts = seconds([&] { serial = qng::run_sweep_serial(sc); });
  const double tp = seconds([&] { parallel = qng::run_sweep(sc); });
  bool same = serial.size() == parallel.size();
  for (std::size_t i = 0; same && i < serial.size(); ++i)
    same = serial[i].alpha2_max == parallel[i].alpha2_max && serial[i].flags == parallel[i].flags;
  std::printf("sweep (100 rows):  serial %.3f s  parallel %.3f s  speedup %.2fx  identical=%s\n", ts, tp,
              ts / tp, same ? "yes" : "no");

  qng::fock::GaussianOptimum os, op;
  const double os_t = seconds([&] { os = qng::fock::gaussian_bound_oracle_serial(-4.0); }, 1);
  const double op_t = seconds([&] { op = qng::fock::gaussian_bound_oracle(-4.0); }, 1);
  std::printf("oracle (a = -4):   serial %.3f s  parallel %.3f s  speedup %.2fx  identical=%s\n", os_t,
              op_t, os_t / op_t, os.value == op.value ? "yes" : "no");
  return same && os.value == op.value ? 0 : 1;
}
