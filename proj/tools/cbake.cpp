// Command-line front end: honest-run demos, attack and game experiments,
// bound arithmetic, and multi-party campaigns. Exit codes: 0 = ran and
// passed its check, 1 = ran but a check failed, 2 = usage error.
#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cbake/experiments.hpp"

namespace {

using namespace cbake;

uint64_t parse_seed(const std::string& text) {
  if (text == "random") {
    std::random_device device;
    return (static_cast<uint64_t>(device()) << 32) ^ device();
  }
  return std::stoull(text, nullptr, 0);
}

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

struct CommonOpts {
  std::string seed = "1";
  std::string output = "text";
  std::string protocol = "ka3";
  std::string profile = "toy";

  bool json() const { return output == "json"; }
};

void add_common(CLI::App* cmd, CommonOpts& opts, const std::string& default_protocol) {
  opts.protocol = default_protocol;
  cmd->add_option("protocol", opts.protocol, "ka2, kem2, ka3 or kem3");
  cmd->add_option("--seed", opts.seed, "decimal/hex seed, or 'random'");
  cmd->add_option("--output", opts.output, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--profile", opts.profile, "group profile: toy or standard");
}

int run_demo(const CommonOpts& opts, unsigned av_bits) {
  auto protocol = protocol_from_name(opts.protocol);
  auto profile = profile_from_name(opts.profile);
  if (!protocol) return usage_error("unknown protocol '" + opts.protocol + "'");
  if (!profile) return usage_error("unknown profile '" + opts.profile + "'");
  const uint64_t seed = parse_seed(opts.seed);

  ExchangeSetup setup;
  setup.protocol = *protocol;
  setup.initiator = PartyId::from_index(0);
  setup.responder = PartyId::from_index(1);
  setup.env = EnvConfig{*profile, av_bits, 256, 256, 256};
  setup.mode = NetMode::am;
  setup.seed = seed;
  ExchangeRecord record = run_exchange(setup, make_passthrough_adversary());

  const bool keys_equal = record.initiator_output.key.has_value() &&
                          record.initiator_output.key == record.responder_output.key;
  const std::string av_hex =
      record.initiator_output.av ? to_hex(*record.initiator_output.av) : "<undefined>";

  if (opts.json()) {
    nlohmann::json out{{"command", "demo"},
                       {"params",
                        {{"protocol", opts.protocol},
                         {"profile", opts.profile},
                         {"av_bits", av_bits},
                         {"seed", seed}}},
                       {"finalize_accept", record.finalize_accept},
                       {"keys_equal", keys_equal},
                       {"av", av_hex},
                       {"pass", record.finalize_accept && keys_equal}};
    out["transcript"] = nlohmann::json::array();
    for (const ProtocolMessage& msg : record.delivered)
      out["transcript"].push_back({{"type", msg_type_name(msg.type)},
                                   {"sender", to_hex(msg.sender.bytes())},
                                   {"receiver", to_hex(msg.receiver.bytes())},
                                   {"bytes", msg.serialize().size()}});
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "demo " << protocol_name(*protocol) << " profile=" << profile_name(*profile)
              << " seed=" << seed << "\n";
    for (const EventRecord& event : record.log) std::cout << "  " << event.to_line() << "\n";
    std::cout << "  keys_equal=" << (keys_equal ? "yes" : "no")
              << " finalize_accept=" << (record.finalize_accept ? "yes" : "no")
              << " av=" << av_hex << "\n";
  }
  return record.finalize_accept && keys_equal ? 0 : 1;
}

void print_report(const ExperimentReport& report, const CommonOpts& opts,
                  const nlohmann::json& params, const std::string& command) {
  if (opts.json()) {
    nlohmann::json out{{"command", command},
                       {"params", params},
                       {"name", report.name},
                       {"trials", report.trials},
                       {"wins", report.wins},
                       {"empirical_rate", report.empirical_rate},
                       {"closed_form", report.reference_value},
                       {"tolerance", report.tolerance},
                       {"check", check_kind_name(report.check)},
                       {"pass", report.pass}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << report.name << ": trials=" << report.trials << " wins=" << report.wins
              << " empirical=" << report.empirical_rate
              << " reference=" << report.reference_value << " tolerance=" << report.tolerance
              << " check=" << check_kind_name(report.check)
              << " -> " << (report.pass ? "pass" : "FAIL") << "\n";
  }
}

int run_attack(const CommonOpts& opts, unsigned av_bits, uint64_t queries, uint64_t trials,
               double tolerance, bool serial) {
  auto protocol = protocol_from_name(opts.protocol);
  auto profile = profile_from_name(opts.profile);
  if (!protocol) return usage_error("unknown protocol '" + opts.protocol + "'");
  if (!profile) return usage_error("unknown profile '" + opts.profile + "'");
  if (!is_two_pass(*protocol))
    return usage_error("the interception attack targets the two-pass flows (ka2, kem2)");
  const uint64_t seed = parse_seed(opts.seed);

  TwoPassAttackConfig config;
  config.protocol = *protocol;
  config.profile = *profile;
  config.av_bits = av_bits;
  config.queries = queries;
  config.trials = trials;
  config.seed = seed;
  config.tolerance = tolerance;
  config.mode = serial ? ExecMode::serial : ExecMode::parallel;
  ExperimentReport report = run_two_pass_attack(config);

  nlohmann::json params{{"protocol", opts.protocol}, {"profile", opts.profile},
                        {"av_bits", av_bits},        {"queries", queries},
                        {"trials", trials},          {"seed", seed}};
  print_report(report, opts, params, "attack");
  return report.pass ? 0 : 1;
}

int run_games(const CommonOpts& opts, unsigned av_bits, unsigned commit_bits, uint64_t queries,
              uint64_t trials, bool serial) {
  auto protocol = protocol_from_name(opts.protocol);
  auto profile = profile_from_name(opts.profile);
  if (!protocol) return usage_error("unknown protocol '" + opts.protocol + "'");
  if (!profile) return usage_error("unknown profile '" + opts.profile + "'");
  if (is_two_pass(*protocol))
    return usage_error("the emulation games target the three-pass flows (ka3, kem3)");
  const uint64_t seed = parse_seed(opts.seed);

  GameConfig config;
  config.env = EnvConfig{*profile, av_bits, 256, commit_bits, 256};
  config.query_limit = queries;
  config.trials = trials;
  config.mode = serial ? ExecMode::serial : ExecMode::parallel;

  BoundParams bound_params;
  bound_params.av_bits = av_bits;
  bound_params.oracle_queries = queries;
  const double bound = per_exchange_emulation_bound(bound_params);

  const std::vector<GameVariant> variants{GameVariant::av, GameVariant::zero, GameVariant::one};
  bool all_pass = true;
  int case_index = 0;

  auto evaluate = [&](const std::string& label, GameResult result, bool never_wins) {
    const double sigma = std::sqrt(bound * (1.0 - bound) / trials);
    ExperimentReport report =
        never_wins ? make_report(label, result.trials, result.wins, 0.0, 0.0,
                                 CheckKind::exact_zero)
                   : make_report(label, result.trials, result.wins, bound, 3.0 * sigma,
                                 CheckKind::upper_bound);
    nlohmann::json params{{"protocol", opts.protocol}, {"av_bits", av_bits},
                          {"commit_bits", commit_bits}, {"queries", queries},
                          {"trials", trials},          {"seed", seed}};
    print_report(report, opts, params, "games");
    all_pass = all_pass && report.pass;
  };

  for (GameVariant variant : variants) {
    config.variant = variant;
    const std::string prefix =
        std::string(protocol_name(*protocol)) + "-game-" + game_variant_name(variant) + "-";
    if (*protocol == Protocol::ka3) {
      const std::vector<std::pair<std::string, KaGameAdversary>> lineup{
          {"identity", make_ka_identity_adversary()},
          {"commit-substitution", make_ka_commit_substitution_adversary()},
          {"responder-key-substitution", make_ka_responder_key_substitution_adversary()},
          {"receiver-substitution", make_ka_receiver_substitution_adversary()},
          {"oracle-search", make_ka_oracle_search_adversary()},
      };
      for (const auto& [name, adversary] : lineup) {
        config.seed = derive_seed(seed, static_cast<uint64_t>(++case_index));
        evaluate(prefix + name, run_ka_game(config, adversary), name == "identity");
      }
    } else {
      const std::vector<std::pair<std::string, KemGameAdversary>> lineup{
          {"identity", make_kem_identity_adversary()},
          {"commit-substitution", make_kem_commit_substitution_adversary()},
          {"encap-substitution", make_kem_encap_substitution_adversary()},
          {"receiver-substitution", make_kem_receiver_substitution_adversary()},
          {"oracle-search", make_kem_oracle_search_adversary()},
      };
      for (const auto& [name, adversary] : lineup) {
        config.seed = derive_seed(seed, static_cast<uint64_t>(++case_index));
        evaluate(prefix + name, run_kem_game(config, adversary), name == "identity");
      }
    }
  }
  return all_pass ? 0 : 1;
}

int run_bounds(const CommonOpts& opts, const BoundParams& params, double epsilon) {
  const double per_exchange = per_exchange_emulation_bound(params);
  const double total = eval_emulation_bound(params);
  const double sk_theorem = eval_sk_bound(epsilon, total, SkRule::theorem);
  const double sk_proposition = eval_sk_bound(epsilon, total, SkRule::proposition);
  if (opts.json()) {
    nlohmann::json out{{"command", "bounds"},
                       {"params",
                        {{"av_bits", params.av_bits},
                         {"queries", params.oracle_queries},
                         {"n_parties", params.n_parties},
                         {"exchanges_per_party", params.exchanges_per_party},
                         {"adv_hiding", params.adv_hiding},
                         {"adv_binding", params.adv_binding},
                         {"adv_strong_binding", params.adv_strong_binding},
                         {"adv_cr", params.adv_cr},
                         {"epsilon", epsilon}}},
                       {"per_exchange", per_exchange},
                       {"emulation_bound", total},
                       {"sk_theorem", sk_theorem},
                       {"sk_proposition", sk_proposition},
                       {"pass", true}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "per_exchange=" << per_exchange << " emulation_bound=" << total
              << " sk_theorem=" << sk_theorem << " sk_proposition=" << sk_proposition << "\n";
  }
  return 0;
}

int run_campaign_cmd(const CommonOpts& opts, unsigned av_bits, size_t n_parties,
                     size_t exchanges_per_pair, uint64_t queries, const std::string& adversary,
                     const std::string& mode, bool serial) {
  auto protocol = protocol_from_name(opts.protocol);
  auto profile = profile_from_name(opts.profile);
  if (!protocol) return usage_error("unknown protocol '" + opts.protocol + "'");
  if (!profile) return usage_error("unknown profile '" + opts.profile + "'");
  const uint64_t seed = parse_seed(opts.seed);

  AdversaryFactory factory;
  if (adversary == "passthrough")
    factory = make_passthrough_factory();
  else if (adversary == "drop")
    factory = make_drop_all_factory();
  else if (adversary == "substitution")
    factory = make_substitution_factory(*protocol);
  else
    return usage_error("unknown adversary '" + adversary + "'");

  BoundParams bound_params;
  bound_params.av_bits = av_bits;
  bound_params.oracle_queries = queries;
  bound_params.n_parties = n_parties;
  bound_params.exchanges_per_party = exchanges_per_pair;

  CampaignConfig config;
  config.protocol = *protocol;
  config.n_parties = n_parties;
  config.exchanges_per_pair = exchanges_per_pair;
  config.env = EnvConfig{*profile, av_bits, 256, 256, 256};
  config.mode = mode == "am" ? NetMode::am : NetMode::um;
  config.seed = seed;
  config.query_limit = queries;
  // Serial under am so a channel violation surfaces as a catchable error.
  config.exec = serial || config.mode == NetMode::am ? ExecMode::serial : ExecMode::parallel;
  config.per_exchange_bound = per_exchange_emulation_bound(bound_params);

  CampaignSummary summary;
  try {
    summary = run_campaign(config, factory);
  } catch (const std::invalid_argument& err) {
    return usage_error(err.what());
  }

  const double sigma = summary.slots == 0
                           ? 0.0
                           : std::sqrt(summary.per_exchange_bound *
                                       (1.0 - summary.per_exchange_bound) / summary.slots);
  const bool pass = summary.break_rate <= summary.per_exchange_bound + 3.0 * sigma;

  if (opts.json()) {
    nlohmann::json out{{"command", "campaign"},
                       {"params",
                        {{"protocol", opts.protocol},
                         {"adversary", adversary},
                         {"mode", mode},
                         {"av_bits", av_bits},
                         {"n_parties", n_parties},
                         {"exchanges_per_pair", exchanges_per_pair},
                         {"queries", queries},
                         {"seed", seed}}},
                       {"slots", summary.slots},
                       {"breaks", summary.breaks},
                       {"break_rate", summary.break_rate},
                       {"per_exchange_bound", summary.per_exchange_bound},
                       {"union_bound", summary.union_bound},
                       {"pass", pass}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "campaign " << protocol_name(*protocol) << " adversary=" << adversary
              << " slots=" << summary.slots << " breaks=" << summary.breaks
              << " break_rate=" << summary.break_rate
              << " per_exchange_bound=" << summary.per_exchange_bound
              << " union_bound=" << summary.union_bound << " -> "
              << (pass ? "pass" : "FAIL") << "\n";
  }
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"commitment-based key-exchange simulator"};
  app.require_subcommand(1);

  CommonOpts demo_opts;
  unsigned demo_av_bits = 256;
  CLI::App* demo = app.add_subcommand("demo", "run one honest exchange and show the transcript");
  add_common(demo, demo_opts, "ka3");
  demo->add_option("--av-bits", demo_av_bits, "digest oracle width")->check(CLI::Range(1, 512));

  CommonOpts attack_opts;
  unsigned attack_av_bits = 8;
  uint64_t attack_queries = 64, attack_trials = 10000;
  double attack_tolerance = 0.02;
  bool attack_serial = false;
  CLI::App* attack =
      app.add_subcommand("attack", "man-in-the-middle attack on a two-pass flow");
  add_common(attack, attack_opts, "ka2");
  attack->add_option("--av-bits", attack_av_bits)->check(CLI::Range(1, 512));
  attack->add_option("--queries", attack_queries, "digest-oracle budget");
  attack->add_option("--trials", attack_trials);
  attack->add_option("--tolerance", attack_tolerance);
  attack->add_flag("--serial", attack_serial, "single-threaded trials");

  CommonOpts games_opts;
  unsigned games_av_bits = 8, games_commit_bits = 256;
  uint64_t games_queries = 64, games_trials = 2000;
  bool games_serial = false;
  CLI::App* games =
      app.add_subcommand("games", "emulation games for a three-pass flow");
  add_common(games, games_opts, "ka3");
  games->add_option("--av-bits", games_av_bits)->check(CLI::Range(1, 512));
  games->add_option("--commit-bits", games_commit_bits)->check(CLI::Range(1, 512));
  games->add_option("--queries", games_queries, "digest-oracle budget");
  games->add_option("--trials", games_trials);
  games->add_flag("--serial", games_serial, "single-threaded trials");

  CommonOpts bounds_opts;
  BoundParams bound_params;
  double bounds_epsilon = 0.0;
  CLI::App* bounds = app.add_subcommand("bounds", "evaluate the closed-form bounds");
  bounds->add_option("--seed", bounds_opts.seed);
  bounds->add_option("--output", bounds_opts.output)->check(CLI::IsMember({"text", "json"}));
  bounds->add_option("--av-bits", bound_params.av_bits)->check(CLI::Range(1, 512));
  bounds->add_option("--queries", bound_params.oracle_queries);
  bounds->add_option("--n-p", bound_params.n_parties, "number of parties");
  bounds->add_option("--n-e", bound_params.exchanges_per_party, "exchanges per party");
  bounds->add_option("--adv-hiding", bound_params.adv_hiding);
  bounds->add_option("--adv-binding", bound_params.adv_binding);
  bounds->add_option("--adv-strong-binding", bound_params.adv_strong_binding);
  bounds->add_option("--adv-cr", bound_params.adv_cr);
  bounds->add_option("--epsilon", bounds_epsilon, "authenticated-model key bound");

  CommonOpts campaign_opts;
  unsigned campaign_av_bits = 8;
  size_t campaign_np = 2, campaign_ne = 1;
  uint64_t campaign_queries = 0;
  std::string campaign_adversary = "passthrough";
  std::string campaign_mode = "um";
  bool campaign_serial = false;
  CLI::App* campaign =
      app.add_subcommand("campaign", "repeated exchanges over all party pairs");
  add_common(campaign, campaign_opts, "ka3");
  campaign->add_option("--av-bits", campaign_av_bits)->check(CLI::Range(1, 512));
  campaign->add_option("--n-p", campaign_np, "number of parties");
  campaign->add_option("--n-e", campaign_ne, "exchanges per ordered pair");
  campaign->add_option("--queries", campaign_queries, "adversary digest budget per exchange");
  campaign->add_option("--adversary", campaign_adversary, "passthrough, drop or substitution");
  campaign->add_option("--mode", campaign_mode, "am or um")
      ->check(CLI::IsMember({"am", "um"}));
  campaign->add_flag("--serial", campaign_serial, "single-threaded exchanges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  try {
    if (demo->parsed()) return run_demo(demo_opts, demo_av_bits);
    if (attack->parsed())
      return run_attack(attack_opts, attack_av_bits, attack_queries, attack_trials,
                        attack_tolerance, attack_serial);
    if (games->parsed())
      return run_games(games_opts, games_av_bits, games_commit_bits, games_queries, games_trials,
                       games_serial);
    if (bounds->parsed()) return run_bounds(bounds_opts, bound_params, bounds_epsilon);
    if (campaign->parsed())
      return run_campaign_cmd(campaign_opts, campaign_av_bits, campaign_np, campaign_ne,
                              campaign_queries, campaign_adversary, campaign_mode,
                              campaign_serial);
  } catch (const std::invalid_argument& err) {
    return usage_error(err.what());
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 2;
}
