#pragma once

#include <cstdint>
#include <map>

#include "prime_race/residue.hpp"

namespace prime_race {

/// Quadratic enumeration cap for enumerate_products.
inline constexpr std::uint64_t kEnumerateCap = 10'000;

/// composite_census bound cap.
inline constexpr std::uint64_t kCensusCap = 100'000'000;

/// multiplicity_histogram bound cap.
inline constexpr std::uint64_t kMultiplicityCap = 10'000'000;

/// Multiplication law of the two progressions: factors from the same class
/// multiply into R1, mixed factors multiply into R5. Neither is rejected
/// with std::invalid_argument.
ResidueClass closure_class(ResidueClass a, ResidueClass b);

/// Number of same-class factor pairs at progression depth n: (n+1)^2.
/// Unordered pairs with repetition, unit excluded from the 1+6n side.
std::uint64_t count_same_class_products(std::uint64_t n);

/// Number of cross-class factor pairs at depth n: n(n+1).
std::uint64_t count_cross_class_products(std::uint64_t n);

struct ProductCountReport {
  std::uint64_t n = 0;
  std::uint64_t same_class_closed = 0;
  std::uint64_t cross_class_closed = 0;
  std::uint64_t same_class_enumerated = 0;
  std::uint64_t cross_class_enumerated = 0;

  bool consistent() const noexcept {
    return same_class_closed == same_class_enumerated &&
           cross_class_closed == cross_class_enumerated;
  }
};

/// Exhaustively enumerate the factor pairs at depth n, classify every
/// product by residue arithmetic (same-class products must land on 1 mod 6,
/// cross products on 5 mod 6) and report both counts next to the closed
/// forms. Capped at kEnumerateCap.
ProductCountReport enumerate_products(std::uint64_t n);

struct ClassCensus {
  std::uint64_t total = 0;      // integers of the class in [1, bound]
  std::uint64_t primes = 0;
  std::uint64_t composites = 0;
};

/// Per-class population of [1, bound]. Primes and composites are counted
/// directly off a sieve; totals come from the progression arithmetic, so
/// total == primes + composites (+1 for the unit, which lives in R1) is a
/// genuine cross-check rather than a tautology.
struct CensusReport {
  std::uint64_t bound = 0;
  ClassCensus r1;
  ClassCensus r5;
  bool unit_counted = false;

  /// composites_R1 - composites_R5 == (N_R1 - N_R5) - 1 + delta, with
  /// delta = primes_R5 - primes_R1. The unit term vanishes for bound 0,
  /// where nothing is counted.
  bool identity_holds() const noexcept;
};

CensusReport composite_census(std::uint64_t bound);

/// multiplicity r -> number of composites of the class with exactly r
/// unordered factorizations c = d*e, 1 < d <= e.
using MultiplicityHistogram = std::map<std::uint64_t, std::uint64_t>;

/// Histogram over all composites <= bound in the given class (R1 or R5;
/// factors of such composites are automatically coprime to 6). Capped at
/// kMultiplicityCap.
MultiplicityHistogram multiplicity_histogram(std::uint64_t bound, ResidueClass cls);

}  // namespace prime_race
