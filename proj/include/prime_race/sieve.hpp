#pragma once

#include <cstdint>
#include <deque>
#include <future>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace prime_race {

/// Integers per segment; half a MiB of sieve buffer per worker.
inline constexpr std::uint64_t kDefaultSegmentLength = 1'048'576;

/// Largest bound simple_sieve will materialize in one allocation.
inline constexpr std::uint64_t kSimpleSieveCap = 1'000'000'000;

/// Largest bound the deliberately naive trial-division oracle accepts.
inline constexpr std::uint64_t kTrialDivisionCap = 1'000'000;

/// Bounds above 2^63-1 are rejected at config validation.
inline constexpr std::uint64_t kMaxSieveBound = (std::uint64_t{1} << 63) - 1;

/// Emit every prime <= bound.
struct MaxValue {
  std::uint64_t bound;
};

/// Emit exactly this many primes.
struct MaxCount {
  std::uint64_t count;
};

using SieveLimit = std::variant<MaxValue, MaxCount>;

struct SieveConfig {
  SieveLimit limit{MaxValue{2}};
  std::uint64_t segment_length = kDefaultSegmentLength;

  /// Throws std::invalid_argument on violation: segment_length must be even
  /// and >= 2, MaxValue.bound in [2, 2^63-1], MaxCount.count >= 1.
  void validate() const;
};

/// Primality lookup for [0, bound], odd-only storage.
class SieveTable {
 public:
  explicit SieveTable(std::uint64_t bound);

  std::uint64_t bound() const noexcept { return bound_; }
  bool is_prime(std::uint64_t v) const noexcept;

 private:
  std::uint64_t bound_;
  std::vector<bool> odd_composite_;  // index i <-> value 2i+1
};

/// All primes <= bound, ascending. Capped at kSimpleSieveCap.
std::vector<std::uint64_t> simple_sieve(std::uint64_t bound);

/// Same contract as simple_sieve but implemented by per-candidate trial
/// division only; independent cross-check. Capped at kTrialDivisionCap.
std::vector<std::uint64_t> trial_division_oracle(std::uint64_t bound);

/// An integer B with p_n <= B. Exact small values for n <= 5, otherwise
/// ceil(n * (ln n + ln ln n)). Requires n >= 1.
std::uint64_t nth_prime_upper_bound(std::uint64_t n);

/// Ordered prime source backed by a segmented sieve. Base primes up to
/// sqrt(bound) are computed once and shared read-only across segments;
/// segments may be sieved by several workers and are reassembled in order,
/// so the emitted sequence does not depend on the worker count.
class PrimeStream {
 public:
  /// start_value: first integer considered (used when resuming; primes below
  /// it are skipped). preceding_count: primes known to lie below start_value;
  /// only consulted to size the sieve range for a MaxCount limit, whose
  /// count is the number of primes this stream itself emits.
  explicit PrimeStream(const SieveConfig& config, std::uint64_t start_value = 2,
                       std::uint64_t preceding_count = 0, unsigned threads = 1);

  PrimeStream(PrimeStream&&) noexcept = default;
  PrimeStream& operator=(PrimeStream&&) noexcept = default;

  /// Next prime, or empty once the limit is reached.
  std::optional<std::uint64_t> next();

  bool exhausted() const noexcept { return exhausted_ && buffer_idx_ >= buffer_.size(); }

  /// Next integer the stream would consider.
  std::uint64_t position() const noexcept { return position_; }

  /// Primes emitted so far by this stream.
  std::uint64_t emitted() const noexcept { return emitted_; }

  std::uint64_t bound() const noexcept { return bound_; }

 private:
  void refill();
  std::vector<std::uint64_t> take_next_segment();

  std::shared_ptr<const std::vector<std::uint64_t>> base_primes_;
  std::uint64_t bound_ = 0;      // inclusive sieve bound
  std::uint64_t remaining_ = 0;  // primes left to emit (MaxCount), else ~0
  std::uint64_t segment_length_ = kDefaultSegmentLength;
  std::uint64_t next_low_ = 3;   // first value of the next segment, odd
  std::uint64_t position_ = 2;
  std::uint64_t emitted_ = 0;
  unsigned threads_ = 1;
  bool emit_two_ = false;
  bool exhausted_ = false;

  std::vector<std::uint64_t> buffer_;
  std::size_t buffer_idx_ = 0;
  std::deque<std::future<std::vector<std::uint64_t>>> inflight_;
};

}  // namespace prime_race
