#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "prime_race/residue.hpp"
#include "prime_race/sieve.hpp"

namespace prime_race {

/// One sampled point of the race trajectory. For two-class moduli the low
/// class is the smaller coprime residue (1 for modulus 6) and the high class
/// the larger (5 for modulus 6); delta == count_high - count_low throughout.
struct DeltaSample {
  std::uint64_t np = 0;
  std::uint64_t prime = 0;
  std::uint64_t count_low = 0;
  std::uint64_t count_high = 0;
  std::int64_t delta = 0;

  bool operator==(const DeltaSample&) const = default;
};

/// A zero crossing of the delta trajectory: the first sample whose nonzero
/// sign differs from the previous nonzero sign.
struct SignChange {
  std::uint64_t np = 0;
  std::uint64_t prime = 0;

  bool operator==(const SignChange&) const = default;
};

/// Running totals of the race. np counts every prime consumed, the primes
/// not coprime to the modulus (2 and 3 for modulus 6) accumulate in
/// neither, so np == sum(counts) + neither at every step.
class RaceCounters {
 public:
  explicit RaceCounters(std::uint64_t modulus = 6);

  /// Rebuild a two-class counter set from checkpointed totals.
  static RaceCounters restored(std::uint64_t modulus, std::uint64_t np,
                               std::uint64_t count_low, std::uint64_t count_high,
                               std::uint64_t neither, std::uint64_t last_prime);

  /// Consume the next prime. Input must be strictly increasing; anything
  /// else is a contract violation and throws std::invalid_argument.
  void accumulate(std::uint64_t prime);

  std::uint64_t modulus() const noexcept { return modulus_; }
  std::uint64_t np() const noexcept { return np_; }
  std::uint64_t neither() const noexcept { return neither_; }
  std::uint64_t last_prime() const noexcept { return last_prime_; }

  /// Ascending coprime residues and their counts, index-aligned.
  const std::vector<std::uint64_t>& residues() const noexcept { return residues_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t count(std::uint64_t residue) const;

  /// True when the modulus has exactly two coprime residue classes
  /// (3, 4 and 6 are the interesting cases).
  bool two_class() const noexcept { return residues_.size() == 2; }

  std::uint64_t count_low() const;   // two_class() only
  std::uint64_t count_high() const;  // two_class() only
  std::int64_t delta() const;        // count_high - count_low

  /// Snapshot at the current np. two_class() only.
  DeltaSample sample() const;

 private:
  std::uint64_t modulus_;
  std::uint64_t np_ = 0;
  std::uint64_t neither_ = 0;
  std::uint64_t last_prime_ = 0;
  std::vector<std::uint64_t> residues_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::int32_t> residue_index_;  // residue -> counts_ slot, -1 if none
};

/// Incremental zero-crossing detector. Zero is neutral: it neither reports
/// nor resets the tracked sign.
class SignChangeDetector {
 public:
  void step(std::uint64_t np, std::uint64_t prime, std::int64_t delta);
  const std::vector<SignChange>& events() const noexcept { return events_; }
  std::vector<SignChange> take() noexcept { return std::move(events_); }

 private:
  int prev_sign_ = 0;
  std::vector<SignChange> events_;
};

/// Crossings of a full-resolution trajectory.
std::vector<SignChange> sign_changes(std::span<const DeltaSample> trajectory);

/// Aggregates over every prime consumed in one run (full resolution, not
/// only the sampled points). min/max report the first np attaining them.
struct RaceSummary {
  DeltaSample final;
  std::int64_t min_delta = 0;
  std::uint64_t min_delta_np = 0;
  std::int64_t max_delta = 0;
  std::uint64_t max_delta_np = 0;
  std::vector<SignChange> sign_changes;
  bool two_class = true;
};

/// Drain the stream into the counters. on_sample fires at every np divisible
/// by stride and once more for the final prime when that np is off-stride;
/// the summary sees every step regardless of stride. Works for any modulus;
/// delta bookkeeping is kept only in the two-class case.
RaceSummary run_race(
    PrimeStream& stream, RaceCounters& counters, std::uint64_t stride,
    const std::function<void(const RaceCounters&)>& on_sample = {});

struct RaceResult {
  std::vector<DeltaSample> samples;
  RaceSummary summary;
};

/// Convenience wrapper materializing the sampled trajectory. Two-class
/// moduli only.
RaceResult delta_series(PrimeStream& stream, std::uint64_t modulus,
                        std::uint64_t stride);

}  // namespace prime_race
