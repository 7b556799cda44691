#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace prime_race {

/// Classification of an integer against the progressions 1+6n and 5+6n.
/// Everything sharing a factor with 6 (the primes 2 and 3 included, and the
/// whole progression 3+6n) lands in Neither.
enum class ResidueClass : std::uint8_t { R1, R5, Neither };

/// Mod-6 classification: R1 iff v = 1 (mod 6), R5 iff v = 5 (mod 6).
ResidueClass classify_residue(std::uint64_t v) noexcept;

/// Generalized classification: the residue v mod modulus when
/// gcd(v, modulus) == 1, empty otherwise. Requires modulus >= 3.
std::optional<std::uint64_t> classify_residue(std::uint64_t v,
                                              std::uint64_t modulus);

/// Ascending residues coprime to the modulus. Requires modulus >= 3.
std::vector<std::uint64_t> coprime_residues(std::uint64_t modulus);

const char* to_string(ResidueClass c) noexcept;

}  // namespace prime_race
