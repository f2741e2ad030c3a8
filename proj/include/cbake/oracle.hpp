#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "cbake/types.hpp"

namespace cbake {

// Lazily sampled random function {0,1}* -> {0,1}^output_bits.
//
// Outputs derive deterministically from (seed, input): two tables built with
// the same seed agree on every input regardless of query order, and a run
// replayed from the same seed reproduces its table exactly. Queried entries
// are memoized so the query log (entry_count, seen) reflects exactly the
// inputs ever asked of this instance.
class OracleTable {
 public:
  static constexpr unsigned kMinBits = 1;
  static constexpr unsigned kMaxBits = 512;

  OracleTable(unsigned output_bits, uint64_t seed);

  // Evaluate the function; never fails, entries are never overwritten.
  const Bytes& query(const Bytes& input);

  unsigned output_bits() const { return output_bits_; }
  size_t output_bytes() const { return (output_bits_ + 7) / 8; }
  uint64_t seed() const { return seed_; }
  uint64_t query_count() const { return query_count_; }
  size_t entry_count() const { return entries_.size(); }
  bool seen(const Bytes& input) const { return entries_.contains(input); }

 private:
  unsigned output_bits_;
  uint64_t seed_;
  uint64_t query_count_ = 0;
  std::map<Bytes, Bytes> entries_;
};

// Countdown of oracle queries granted to an adversary.
struct QueryBudget {
  uint64_t limit = 0;
  uint64_t used = 0;

  bool exhausted() const { return used >= limit; }
  uint64_t remaining() const { return exhausted() ? 0 : limit - used; }
};

// Adversary-facing oracle view: queries are metered against a budget and
// refused (nullopt) once it is exhausted. Experiments treat refusal as
// adversary failure, never as a crash.
class BudgetedOracle {
 public:
  BudgetedOracle(OracleTable& table, QueryBudget& budget)
      : table_(&table), budget_(&budget) {}

  std::optional<Bytes> query(const Bytes& input) {
    if (budget_->exhausted()) return std::nullopt;
    ++budget_->used;
    return table_->query(input);
  }

  const QueryBudget& budget() const { return *budget_; }
  uint64_t remaining() const { return budget_->remaining(); }
  unsigned output_bits() const { return table_->output_bits(); }

 private:
  OracleTable* table_;
  QueryBudget* budget_;
};

}  // namespace cbake
