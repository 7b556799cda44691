#include "prime_race/residue.hpp"

#include <numeric>
#include <stdexcept>

namespace prime_race {

ResidueClass classify_residue(std::uint64_t v) noexcept {
  switch (v % 6) {
    case 1: return ResidueClass::R1;
    case 5: return ResidueClass::R5;
    default: return ResidueClass::Neither;
  }
}

std::optional<std::uint64_t> classify_residue(std::uint64_t v,
                                              std::uint64_t modulus) {
  if (modulus < 3) throw std::invalid_argument("modulus must be >= 3");
  const std::uint64_t r = v % modulus;
  if (std::gcd(r, modulus) != 1) return std::nullopt;
  return r;
}

std::vector<std::uint64_t> coprime_residues(std::uint64_t modulus) {
  if (modulus < 3) throw std::invalid_argument("modulus must be >= 3");
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 1; r < modulus; ++r) {
    if (std::gcd(r, modulus) == 1) out.push_back(r);
  }
  return out;
}

const char* to_string(ResidueClass c) noexcept {
  switch (c) {
    case ResidueClass::R1: return "1+6n";
    case ResidueClass::R5: return "5+6n";
    default: return "neither";
  }
}

}  // namespace prime_race
