#include "prime_race/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prime_race {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Primes in [low, high] with low odd, low >= 3, by marking odd multiples of
// the odd base primes. Base primes falling inside the range stay unmarked
// because marking starts at p*p.
std::vector<std::uint64_t> sieve_segment(std::uint64_t low, std::uint64_t high,
                                         const std::vector<std::uint64_t>& base) {
  const std::size_t n = static_cast<std::size_t>((high - low) / 2 + 1);
  std::vector<std::uint8_t> composite(n, 0);
  for (const std::uint64_t p : base) {
    if (p == 2) continue;
    if (p * p > high) break;
    std::uint64_t first = ((low + p - 1) / p) * p;
    if (first < p * p) first = p * p;
    if (first % 2 == 0) first += p;
    for (std::uint64_t m = first; m <= high; m += 2 * p) {
      composite[static_cast<std::size_t>((m - low) / 2)] = 1;
    }
  }
  std::vector<std::uint64_t> primes;
  primes.reserve(n / 8 + 16);
  for (std::size_t i = 0; i < n; ++i) {
    if (!composite[i]) primes.push_back(low + 2 * i);
  }
  return primes;
}

}  // namespace

void SieveConfig::validate() const {
  if (segment_length < 2 || segment_length % 2 != 0) {
    throw std::invalid_argument("segment_length must be even and >= 2");
  }
  if (const auto* mv = std::get_if<MaxValue>(&limit)) {
    if (mv->bound < 2) throw std::invalid_argument("MaxValue bound must be >= 2");
    if (mv->bound > kMaxSieveBound) {
      throw std::invalid_argument("MaxValue bound exceeds 2^63-1");
    }
  } else {
    if (std::get<MaxCount>(limit).count < 1) {
      throw std::invalid_argument("MaxCount count must be >= 1");
    }
  }
}

SieveTable::SieveTable(std::uint64_t bound) : bound_(bound) {
  if (bound > kSimpleSieveCap) {
    throw std::invalid_argument("sieve bound exceeds cap of 1e9");
  }
  if (bound < 3) return;
  const std::uint64_t half = (bound - 1) / 2;  // odd values 3..bound at 1..half
  odd_composite_.assign(static_cast<std::size_t>(half) + 1, false);
  for (std::uint64_t i = 1;; ++i) {
    const std::uint64_t p = 2 * i + 1;
    if (p * p > bound) break;
    if (odd_composite_[static_cast<std::size_t>(i)]) continue;
    for (std::uint64_t j = (p * p - 1) / 2; j <= half; j += p) {
      odd_composite_[static_cast<std::size_t>(j)] = true;
    }
  }
}

bool SieveTable::is_prime(std::uint64_t v) const noexcept {
  if (v > bound_) return false;
  if (v == 2) return true;
  if (v < 2 || v % 2 == 0) return false;
  const std::uint64_t i = (v - 1) / 2;
  if (i >= odd_composite_.size()) return false;
  return !odd_composite_[static_cast<std::size_t>(i)];
}

std::vector<std::uint64_t> simple_sieve(std::uint64_t bound) {
  SieveTable table(bound);
  std::vector<std::uint64_t> primes;
  if (bound < 2) return primes;
  primes.push_back(2);
  for (std::uint64_t v = 3; v <= bound; v += 2) {
    if (table.is_prime(v)) primes.push_back(v);
  }
  return primes;
}

std::vector<std::uint64_t> trial_division_oracle(std::uint64_t bound) {
  if (bound > kTrialDivisionCap) {
    throw std::invalid_argument("trial division bound exceeds cap of 1e6");
  }
  std::vector<std::uint64_t> primes;
  for (std::uint64_t v = 2; v <= bound; ++v) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= v; ++d) {
      if (v % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(v);
  }
  return primes;
}

std::uint64_t nth_prime_upper_bound(std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("prime index must be >= 1");
  static constexpr std::uint64_t small[] = {2, 3, 5, 7, 11};
  if (n <= 5) return small[n - 1];
  const double nd = static_cast<double>(n);
  const double b = nd * (std::log(nd) + std::log(std::log(nd)));
  if (b >= static_cast<double>(kMaxSieveBound)) {
    throw std::invalid_argument("prime index too large to bound in 63 bits");
  }
  return static_cast<std::uint64_t>(std::ceil(b));
}

PrimeStream::PrimeStream(const SieveConfig& config, std::uint64_t start_value,
                         std::uint64_t preceding_count, unsigned threads)
    : segment_length_(config.segment_length),
      threads_(threads == 0 ? 1 : threads) {
  config.validate();
  if (const auto* mv = std::get_if<MaxValue>(&config.limit)) {
    bound_ = mv->bound;
    remaining_ = ~std::uint64_t{0};
  } else {
    const std::uint64_t count = std::get<MaxCount>(config.limit).count;
    bound_ = nth_prime_upper_bound(preceding_count + count);
    remaining_ = count;
  }
  if (start_value < 2) start_value = 2;
  position_ = start_value;
  emit_two_ = (start_value <= 2 && bound_ >= 2);
  next_low_ = std::max<std::uint64_t>(3, start_value);
  if (next_low_ % 2 == 0) ++next_low_;
  if (next_low_ <= bound_) {
    base_primes_ = std::make_shared<const std::vector<std::uint64_t>>(
        simple_sieve(isqrt(bound_)));
  } else {
    exhausted_ = true;
  }
  if (remaining_ == 0) exhausted_ = true;
}

std::vector<std::uint64_t> PrimeStream::take_next_segment() {
  // Dispatch is in segment order and results are joined in the same order,
  // so the emitted sequence is independent of the worker count.
  if (threads_ <= 1) {
    if (next_low_ > bound_) return {};
    const std::uint64_t low = next_low_;
    std::uint64_t high = std::min(bound_, low + segment_length_ - 1);
    if (high % 2 == 0) --high;
    next_low_ = high + 2;
    return sieve_segment(low, high, *base_primes_);
  }
  while (inflight_.size() < threads_ && next_low_ <= bound_) {
    const std::uint64_t low = next_low_;
    std::uint64_t high = std::min(bound_, low + segment_length_ - 1);
    if (high % 2 == 0) --high;
    next_low_ = high + 2;
    inflight_.push_back(std::async(std::launch::async, [low, high, base = base_primes_]() {
      return sieve_segment(low, high, *base);
    }));
  }
  if (inflight_.empty()) return {};
  auto primes = inflight_.front().get();
  inflight_.pop_front();
  return primes;
}

void PrimeStream::refill() {
  buffer_.clear();
  buffer_idx_ = 0;
  while (buffer_.empty()) {
    if (next_low_ > bound_ && inflight_.empty()) {
      exhausted_ = true;
      return;
    }
    buffer_ = take_next_segment();
    if (buffer_.empty() && next_low_ > bound_ && inflight_.empty()) {
      exhausted_ = true;
      return;
    }
  }
}

std::optional<std::uint64_t> PrimeStream::next() {
  if (remaining_ == 0) {
    exhausted_ = true;
    return std::nullopt;
  }
  if (emit_two_) {
    emit_two_ = false;
    position_ = 3;
    ++emitted_;
    if (remaining_ != ~std::uint64_t{0}) --remaining_;
    return 2;
  }
  while (buffer_idx_ >= buffer_.size()) {
    if (exhausted_) return std::nullopt;
    refill();
    if (exhausted_ && buffer_.empty()) return std::nullopt;
  }
  const std::uint64_t p = buffer_[buffer_idx_++];
  position_ = p + 1;
  ++emitted_;
  if (remaining_ != ~std::uint64_t{0}) --remaining_;
  return p;
}

}  // namespace prime_race
