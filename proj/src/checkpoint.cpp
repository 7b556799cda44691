#include "prime_race/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace prime_race {

namespace {

constexpr std::array<std::uint8_t, 5> kMagic = {'P', 'R', 'A', 'C', 'E'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

Checkpoint Checkpoint::capture(const RaceCounters& counters) {
  if (!counters.two_class()) {
    throw std::invalid_argument("checkpoint requires a two-class modulus");
  }
  Checkpoint cp;
  cp.modulus = counters.modulus();
  cp.np = counters.np();
  cp.count_low = counters.count_low();
  cp.count_high = counters.count_high();
  cp.neither = counters.neither();
  cp.last_prime = counters.last_prime();
  cp.next_position = counters.last_prime() == 0 ? 2 : counters.last_prime() + 1;
  return cp;
}

RaceCounters Checkpoint::restore() const {
  try {
    return RaceCounters::restored(modulus, np, count_low, count_high, neither,
                                  last_prime);
  } catch (const std::invalid_argument& e) {
    throw checkpoint_error(checkpoint_error::kind::inconsistent, e.what());
  }
}

std::vector<std::uint8_t> save_checkpoint(const Checkpoint& cp) {
  std::vector<std::uint8_t> out;
  out.reserve(kCheckpointSize);
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  put_u32(out, Checkpoint::kVersion);
  const std::uint64_t words[7] = {cp.modulus,  cp.np,         cp.count_low,
                                  cp.count_high, cp.neither,  cp.last_prime,
                                  cp.next_position};
  std::uint64_t checksum = 0;
  for (const std::uint64_t w : words) {
    put_u64(out, w);
    checksum += w;
  }
  put_u64(out, checksum);
  return out;
}

Checkpoint load_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kCheckpointSize) {
    throw checkpoint_error(checkpoint_error::kind::truncated,
                           "checkpoint must be exactly 73 bytes, got " +
                               std::to_string(bytes.size()));
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw checkpoint_error(checkpoint_error::kind::bad_magic,
                           "checkpoint magic mismatch");
  }
  const std::uint32_t version = get_u32(bytes.data() + 5);
  if (version != Checkpoint::kVersion) {
    throw checkpoint_error(checkpoint_error::kind::version_mismatch,
                           "unsupported checkpoint version " +
                               std::to_string(version));
  }
  std::uint64_t words[7];
  std::uint64_t checksum = 0;
  for (int i = 0; i < 7; ++i) {
    words[i] = get_u64(bytes.data() + 9 + 8 * i);
    checksum += words[i];
  }
  if (checksum != get_u64(bytes.data() + 65)) {
    throw checkpoint_error(checkpoint_error::kind::checksum_mismatch,
                           "checkpoint checksum mismatch");
  }
  Checkpoint cp;
  cp.modulus = words[0];
  cp.np = words[1];
  cp.count_low = words[2];
  cp.count_high = words[3];
  cp.neither = words[4];
  cp.last_prime = words[5];
  cp.next_position = words[6];
  if (cp.count_low + cp.count_high + cp.neither != cp.np) {
    throw checkpoint_error(checkpoint_error::kind::inconsistent,
                           "checkpoint counts do not add up to np");
  }
  return cp;
}

void write_checkpoint_file(const std::filesystem::path& path,
                           const Checkpoint& cp) {
  const auto bytes = save_checkpoint(cp);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::ios_base::failure("cannot open checkpoint file for writing: " +
                                 path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    throw std::ios_base::failure("short write to checkpoint file: " +
                                 path.string());
  }
}

Checkpoint read_checkpoint_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::ios_base::failure("cannot open checkpoint file: " + path.string());
  }
  std::vector<std::uint8_t> bytes(
      (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw std::ios_base::failure("read error on checkpoint file: " +
                                 path.string());
  }
  return load_checkpoint(bytes);
}

}  // namespace prime_race
