#include "prime_race/race.hpp"

#include <limits>
#include <stdexcept>

namespace prime_race {

RaceCounters::RaceCounters(std::uint64_t modulus)
    : modulus_(modulus), residues_(coprime_residues(modulus)) {
  counts_.assign(residues_.size(), 0);
  residue_index_.assign(static_cast<std::size_t>(modulus), -1);
  for (std::size_t i = 0; i < residues_.size(); ++i) {
    residue_index_[static_cast<std::size_t>(residues_[i])] =
        static_cast<std::int32_t>(i);
  }
}

RaceCounters RaceCounters::restored(std::uint64_t modulus, std::uint64_t np,
                                    std::uint64_t count_low,
                                    std::uint64_t count_high,
                                    std::uint64_t neither,
                                    std::uint64_t last_prime) {
  RaceCounters c(modulus);
  if (!c.two_class()) {
    throw std::invalid_argument("restore requires a two-class modulus");
  }
  if (count_low + count_high + neither != np) {
    throw std::invalid_argument("restored counts do not add up to np");
  }
  c.np_ = np;
  c.neither_ = neither;
  c.last_prime_ = last_prime;
  c.counts_[0] = count_low;
  c.counts_[1] = count_high;
  return c;
}

void RaceCounters::accumulate(std::uint64_t prime) {
  if (prime <= last_prime_) {
    throw std::invalid_argument("primes must arrive strictly increasing");
  }
  last_prime_ = prime;
  ++np_;
  const std::uint64_t r = prime % modulus_;
  const std::int32_t slot = residue_index_[static_cast<std::size_t>(r)];
  if (slot < 0) {
    ++neither_;
  } else {
    ++counts_[static_cast<std::size_t>(slot)];
  }
}

std::uint64_t RaceCounters::count(std::uint64_t residue) const {
  const std::int32_t slot =
      residue < modulus_ ? residue_index_[static_cast<std::size_t>(residue)] : -1;
  if (slot < 0) throw std::invalid_argument("residue not coprime to modulus");
  return counts_[static_cast<std::size_t>(slot)];
}

std::uint64_t RaceCounters::count_low() const {
  if (!two_class()) throw std::logic_error("count_low needs a two-class modulus");
  return counts_[0];
}

std::uint64_t RaceCounters::count_high() const {
  if (!two_class()) throw std::logic_error("count_high needs a two-class modulus");
  return counts_[1];
}

std::int64_t RaceCounters::delta() const {
  return static_cast<std::int64_t>(count_high()) -
         static_cast<std::int64_t>(count_low());
}

DeltaSample RaceCounters::sample() const {
  return DeltaSample{np_, last_prime_, count_low(), count_high(), delta()};
}

void SignChangeDetector::step(std::uint64_t np, std::uint64_t prime,
                              std::int64_t delta) {
  const int sign = (delta > 0) - (delta < 0);
  if (sign == 0) return;
  if (prev_sign_ != 0 && sign != prev_sign_) events_.push_back({np, prime});
  prev_sign_ = sign;
}

std::vector<SignChange> sign_changes(std::span<const DeltaSample> trajectory) {
  SignChangeDetector det;
  for (const auto& s : trajectory) det.step(s.np, s.prime, s.delta);
  return det.take();
}

RaceSummary run_race(PrimeStream& stream, RaceCounters& counters,
                     std::uint64_t stride,
                     const std::function<void(const RaceCounters&)>& on_sample) {
  if (stride == 0) throw std::invalid_argument("stride must be >= 1");
  RaceSummary summary;
  summary.two_class = counters.two_class();
  summary.min_delta = std::numeric_limits<std::int64_t>::max();
  summary.max_delta = std::numeric_limits<std::int64_t>::min();
  SignChangeDetector detector;
  bool consumed = false;
  bool last_sampled = false;
  while (auto p = stream.next()) {
    counters.accumulate(*p);
    consumed = true;
    if (summary.two_class) {
      const std::int64_t d = counters.delta();
      if (d < summary.min_delta) {
        summary.min_delta = d;
        summary.min_delta_np = counters.np();
      }
      if (d > summary.max_delta) {
        summary.max_delta = d;
        summary.max_delta_np = counters.np();
      }
      detector.step(counters.np(), *p, d);
    }
    last_sampled = counters.np() % stride == 0;
    if (last_sampled && on_sample) on_sample(counters);
  }
  if (consumed && !last_sampled && on_sample) on_sample(counters);
  if (summary.two_class) {
    summary.final = counters.sample();
    summary.sign_changes = detector.take();
    if (!consumed && counters.np() == 0) {
      summary.min_delta = summary.max_delta = 0;
      summary.min_delta_np = summary.max_delta_np = 0;
    } else if (!consumed) {
      summary.min_delta = summary.max_delta = counters.delta();
      summary.min_delta_np = summary.max_delta_np = counters.np();
    }
  } else {
    summary.final = DeltaSample{counters.np(), counters.last_prime(), 0, 0, 0};
    summary.min_delta = summary.max_delta = 0;
    summary.min_delta_np = summary.max_delta_np = 0;
  }
  return summary;
}

RaceResult delta_series(PrimeStream& stream, std::uint64_t modulus,
                        std::uint64_t stride) {
  RaceCounters counters(modulus);
  if (!counters.two_class()) {
    throw std::invalid_argument("delta series needs a two-class modulus");
  }
  RaceResult result;
  result.summary = run_race(stream, counters, stride,
                            [&result](const RaceCounters& c) {
                              result.samples.push_back(c.sample());
                            });
  return result;
}

}  // namespace prime_race
