// Times the Monte Carlo layer in serial and OpenMP modes on three
// representative workloads and checks that both modes agree on the counts.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "cbake/experiments.hpp"
#include "cbake/primitives.hpp"
#include "cbake/rng.hpp"
#include "cbake/trial_runner.hpp"

using namespace cbake;

namespace {

struct Workload {
  const char* label;
  std::function<uint64_t(ExecMode)> run;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  double scale = 1.0;
  if (argc > 1) scale = std::strtod(argv[1], nullptr);
  if (scale <= 0) {
    std::fprintf(stderr, "usage: %s [scale]\n", argv[0]);
    return 2;
  }
  const auto scaled = [scale](uint64_t n) {
    return static_cast<uint64_t>(static_cast<double>(n) * scale);
  };

  const Workload workloads[] = {
      {"two-pass attack, ka2 q=64",
       [&](ExecMode mode) {
         TwoPassAttackConfig config;
         config.trials = scaled(4000);
         config.seed = 1;
         config.mode = mode;
         return run_two_pass_attack(config).wins;
       }},
      {"emulation game, ka3 full",
       [&](ExecMode mode) {
         GameConfig config;
         config.env = EnvConfig{Profile::toy64, 8, 256, 256, 256};
         config.trials = scaled(20000);
         config.seed = 2;
         config.mode = mode;
         return run_ka_game(config, make_ka_receiver_substitution_adversary()).wins;
       }},
      {"DH agreement, standard2048",
       [&](ExecMode mode) {
         GroupParams params = GroupParams::make(Profile::standard2048);
         auto trial = [&params](uint64_t, uint64_t seed) {
           Rng rng(seed);
           KeyPair a = ka_keygen(params, rng);
           KeyPair b = ka_keygen(params, rng);
           auto ab = ka(params, b.pk, a.sk);
           auto ba = ka(params, a.pk, b.sk);
           return ab && ba && *ab == *ba;
         };
         return run_trials(scaled(256), 3, trial, mode);
       }},
  };

  std::printf("%-30s %12s %12s %9s %7s\n", "workload", "serial[s]", "parallel[s]", "speedup",
              "agree");
  bool all_agree = true;
  for (const Workload& workload : workloads) {
    auto start = std::chrono::steady_clock::now();
    const uint64_t serial_wins = workload.run(ExecMode::serial);
    const double serial_s = seconds_since(start);

    start = std::chrono::steady_clock::now();
    const uint64_t parallel_wins = workload.run(ExecMode::parallel);
    const double parallel_s = seconds_since(start);

    const bool agree = serial_wins == parallel_wins;
    all_agree = all_agree && agree;
    std::printf("%-30s %12.3f %12.3f %8.2fx %7s\n", workload.label, serial_s, parallel_s,
                parallel_s > 0 ? serial_s / parallel_s : 0.0, agree ? "yes" : "NO");
  }
  return all_agree ? 0 : 1;
}
