#include "cbake/trial_runner.hpp"

namespace cbake {

uint64_t run_trials_serial(uint64_t trials, uint64_t base_seed, const TrialFn& fn) {
  uint64_t wins = 0;
  for (uint64_t i = 0; i < trials; ++i)
    if (fn(i, derive_seed(base_seed, i))) ++wins;
  return wins;
}

uint64_t run_trials_parallel(uint64_t trials, uint64_t base_seed, const TrialFn& fn) {
  uint64_t wins = 0;
  const int64_t n = static_cast<int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : wins)
  for (int64_t i = 0; i < n; ++i) {
    uint64_t idx = static_cast<uint64_t>(i);
    if (fn(idx, derive_seed(base_seed, idx))) ++wins;
  }
  return wins;
}

uint64_t run_trials(uint64_t trials, uint64_t base_seed, const TrialFn& fn, ExecMode mode) {
  return mode == ExecMode::serial ? run_trials_serial(trials, base_seed, fn)
                                  : run_trials_parallel(trials, base_seed, fn);
}

}  // namespace cbake
