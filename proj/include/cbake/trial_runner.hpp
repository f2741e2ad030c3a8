#pragma once

#include <cstdint>
#include <functional>

#include "cbake/types.hpp"

namespace cbake {

enum class ExecMode { serial, parallel };

// One Monte Carlo trial: receives its index and a seed derived from
// (base_seed, index), returns success. Trials must draw all randomness from
// that seed and share no mutable state, which is what makes the two runners
// below interchangeable.
using TrialFn = std::function<bool(uint64_t index, uint64_t seed)>;

// Reference loop. Kept simple on purpose; the parallel runner is checked
// against it for equal win counts.
uint64_t run_trials_serial(uint64_t trials, uint64_t base_seed, const TrialFn& fn);

// OpenMP loop. Win counts aggregate by reduction, so results match the
// serial runner bit for bit regardless of scheduling.
uint64_t run_trials_parallel(uint64_t trials, uint64_t base_seed, const TrialFn& fn);

uint64_t run_trials(uint64_t trials, uint64_t base_seed, const TrialFn& fn, ExecMode mode);

}  // namespace cbake
