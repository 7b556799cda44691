#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "prime_race/race.hpp"

namespace prime_race {

class checkpoint_error : public std::runtime_error {
 public:
  enum class kind {
    truncated,
    bad_magic,
    version_mismatch,
    checksum_mismatch,
    inconsistent,
  };

  checkpoint_error(kind k, const std::string& what)
      : std::runtime_error(what), kind_(k) {}

  kind error_kind() const noexcept { return kind_; }

 private:
  kind kind_;
};

/// Resumable race state. Serialized form is little-endian and bit-exact:
///
///   offset  size  field
///        0     5  magic "PRACE"
///        5     4  u32 format version (currently 1)
///        9     8  u64 modulus
///       17     8  u64 np
///       25     8  u64 count1 (low-class count)
///       33     8  u64 count5 (high-class count)
///       41     8  u64 neither
///       49     8  u64 last_prime
///       57     8  u64 next_position
///       65     8  u64 checksum: sum of the seven preceding u64 words mod 2^64
///
/// 73 bytes total. Only two-class moduli are representable.
struct Checkpoint {
  static constexpr std::uint32_t kVersion = 1;

  std::uint64_t modulus = 6;
  std::uint64_t np = 0;
  std::uint64_t count_low = 0;
  std::uint64_t count_high = 0;
  std::uint64_t neither = 0;
  std::uint64_t last_prime = 0;
  std::uint64_t next_position = 2;

  /// Snapshot the counters; next_position is the integer after the last
  /// consumed prime. Throws std::invalid_argument unless counters.two_class().
  static Checkpoint capture(const RaceCounters& counters);

  /// Rebuild counters for continuation. Throws checkpoint_error on an
  /// internally inconsistent snapshot.
  RaceCounters restore() const;

  bool operator==(const Checkpoint&) const = default;
};

inline constexpr std::size_t kCheckpointSize = 73;

std::vector<std::uint8_t> save_checkpoint(const Checkpoint& cp);
Checkpoint load_checkpoint(std::span<const std::uint8_t> bytes);

/// File variants. Open/read/write failures throw std::ios_base::failure;
/// malformed content throws checkpoint_error.
void write_checkpoint_file(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint read_checkpoint_file(const std::filesystem::path& path);

}  // namespace prime_race
