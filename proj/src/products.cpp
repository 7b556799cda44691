#include "prime_race/products.hpp"

#include <stdexcept>
#include <vector>

#include "prime_race/sieve.hpp"

namespace prime_race {

namespace {

// Integers in [1, bound] congruent to r mod 6, r in {1, 5}.
std::uint64_t progression_total(std::uint64_t bound, std::uint64_t r) {
  if (bound < r) return 0;
  return (bound - r) / 6 + 1;
}

}  // namespace

ResidueClass closure_class(ResidueClass a, ResidueClass b) {
  if (a == ResidueClass::Neither || b == ResidueClass::Neither) {
    throw std::invalid_argument("closure is defined on R1 and R5 only");
  }
  return a == b ? ResidueClass::R1 : ResidueClass::R5;
}

std::uint64_t count_same_class_products(std::uint64_t n) {
  return (n + 1) * (n + 1);
}

std::uint64_t count_cross_class_products(std::uint64_t n) {
  return n * (n + 1);
}

ProductCountReport enumerate_products(std::uint64_t n) {
  if (n > kEnumerateCap) {
    throw std::invalid_argument("enumeration depth exceeds cap of 10000");
  }
  ProductCountReport report;
  report.n = n;
  report.same_class_closed = count_same_class_products(n);
  report.cross_class_closed = count_cross_class_products(n);

  // Factor pools at depth n. The unit is excluded from the 1+6n side.
  std::vector<std::uint64_t> r1, r5;
  r1.reserve(n);
  r5.reserve(n + 1);
  for (std::uint64_t k = 1; k <= n; ++k) r1.push_back(1 + 6 * k);
  for (std::uint64_t k = 0; k <= n; ++k) r5.push_back(5 + 6 * k);

  auto count_unordered = [&report](const std::vector<std::uint64_t>& pool) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = i; j < pool.size(); ++j) {
        if (classify_residue(pool[i] * pool[j]) != ResidueClass::R1) {
          throw std::logic_error("same-class product left the 1+6n progression");
        }
        ++report.same_class_enumerated;
      }
    }
  };
  count_unordered(r1);
  count_unordered(r5);

  for (const std::uint64_t a : r1) {
    for (const std::uint64_t b : r5) {
      if (classify_residue(a * b) != ResidueClass::R5) {
        throw std::logic_error("cross product left the 5+6n progression");
      }
      ++report.cross_class_enumerated;
    }
  }
  return report;
}

bool CensusReport::identity_holds() const noexcept {
  const auto s = [](std::uint64_t v) { return static_cast<std::int64_t>(v); };
  const std::int64_t delta = s(r5.primes) - s(r1.primes);
  const std::int64_t unit = unit_counted ? 1 : 0;
  return s(r1.composites) - s(r5.composites) ==
         (s(r1.total) - s(r5.total)) - unit + delta;
}

CensusReport composite_census(std::uint64_t bound) {
  if (bound > kCensusCap) {
    throw std::invalid_argument("census bound exceeds cap of 1e8");
  }
  CensusReport report;
  report.bound = bound;
  report.r1.total = progression_total(bound, 1);
  report.r5.total = progression_total(bound, 5);
  if (bound == 0) return report;

  const SieveTable table(bound);
  if (bound >= 1) report.unit_counted = true;  // 1 is neither prime nor composite
  for (std::uint64_t v = 5; v <= bound; v += 6) {
    if (table.is_prime(v)) ++report.r5.primes; else ++report.r5.composites;
    const std::uint64_t w = v + 2;  // 7, 13, ...
    if (w > bound) break;
    if (table.is_prime(w)) ++report.r1.primes; else ++report.r1.composites;
  }
  return report;
}

MultiplicityHistogram multiplicity_histogram(std::uint64_t bound,
                                             ResidueClass cls) {
  if (bound > kMultiplicityCap) {
    throw std::invalid_argument("histogram bound exceeds cap of 1e7");
  }
  if (cls == ResidueClass::Neither) {
    throw std::invalid_argument("histogram is defined on R1 and R5 only");
  }
  MultiplicityHistogram hist;
  if (bound < 25) return hist;  // 25 is the least composite in either class

  // Divisor counts of the odd integers <= bound; index i <-> value 2i+1.
  // Every divisor of an odd number is odd, so only odd d contribute.
  std::vector<std::uint16_t> tau((bound + 1) / 2, 0);
  for (std::uint64_t d = 1; d <= bound; d += 2) {
    for (std::uint64_t m = d; m <= bound; m += 2 * d) {
      ++tau[static_cast<std::size_t>((m - 1) / 2)];
    }
  }

  const std::uint64_t start = cls == ResidueClass::R1 ? 7 : 5;
  for (std::uint64_t v = start; v <= bound; v += 6) {
    const std::uint16_t t = tau[static_cast<std::size_t>((v - 1) / 2)];
    if (t < 3) continue;  // 1 or a prime
    // Unordered factorizations v = d*e with 1 < d <= e: divisor pairs
    // excluding {1, v}, which is (t - 1) / 2 for square and non-square alike.
    ++hist[(static_cast<std::uint64_t>(t) - 1) / 2];
  }
  return hist;
}

}  // namespace prime_race
