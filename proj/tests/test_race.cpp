#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "prime_race/checkpoint.hpp"
#include "prime_race/race.hpp"
#include "prime_race/residue.hpp"

using namespace prime_race;
namespace fs = std::filesystem;

namespace {

PrimeStream count_stream(std::uint64_t n) {
  SieveConfig cfg;
  cfg.limit = MaxCount{n};
  return PrimeStream(cfg);
}

PrimeStream value_stream(std::uint64_t bound) {
  SieveConfig cfg;
  cfg.limit = MaxValue{bound};
  return PrimeStream(cfg);
}

}  // namespace

TEST_CASE("residue classification mod 6") {
  CHECK(classify_residue(1) == ResidueClass::R1);
  CHECK(classify_residue(7) == ResidueClass::R1);
  CHECK(classify_residue(25) == ResidueClass::R1);
  CHECK(classify_residue(5) == ResidueClass::R5);
  CHECK(classify_residue(35) == ResidueClass::R5);
  for (std::uint64_t v : {0ull, 2ull, 3ull, 4ull, 6ull, 9ull, 21ull}) {
    CHECK(classify_residue(v) == ResidueClass::Neither);
  }
}

TEST_CASE("generalized residue classification") {
  CHECK(classify_residue(7, 6) == 1);
  CHECK(classify_residue(11, 6) == 5);
  CHECK_FALSE(classify_residue(9, 6).has_value());
  CHECK(classify_residue(7, 4) == 3);
  CHECK_FALSE(classify_residue(6, 4).has_value());
  CHECK_THROWS_AS(classify_residue(7, 2), std::invalid_argument);

  CHECK(coprime_residues(6) == std::vector<std::uint64_t>{1, 5});
  CHECK(coprime_residues(4) == std::vector<std::uint64_t>{1, 3});
  CHECK(coprime_residues(3) == std::vector<std::uint64_t>{1, 2});
  CHECK(coprime_residues(8) == std::vector<std::uint64_t>{1, 3, 5, 7});
  CHECK(coprime_residues(7).size() == 6);
}

TEST_CASE("race counters over the first primes") {
  RaceCounters c;
  const std::uint64_t primes[] = {2, 3, 5, 7, 11};
  const std::int64_t want_delta[] = {0, 0, 1, 0, 1};
  for (int i = 0; i < 5; ++i) {
    c.accumulate(primes[i]);
    CHECK(c.delta() == want_delta[i]);
  }
  CHECK(c.np() == 5);
  CHECK(c.neither() == 2);
  CHECK(c.count_low() == 1);   // 7
  CHECK(c.count_high() == 2);  // 5, 11
  CHECK_THROWS_AS(c.accumulate(11), std::invalid_argument);
  CHECK_THROWS_AS(c.accumulate(7), std::invalid_argument);
}

TEST_CASE("race counters at np 15") {
  RaceCounters c;
  auto s = count_stream(15);
  while (auto p = s.next()) c.accumulate(*p);
  CHECK(c.last_prime() == 47);
  CHECK(c.count(1) == 6);
  CHECK(c.count(5) == 7);
  CHECK(c.delta() == 1);
  CHECK_THROWS_AS(c.count(4), std::invalid_argument);
}

TEST_CASE("sign change detector treats zero as neutral") {
  SignChangeDetector d;
  d.step(1, 2, 0);
  d.step(2, 3, 1);
  d.step(3, 5, 0);
  d.step(4, 7, 2);
  CHECK(d.events().empty());
  d.step(5, 11, -1);
  REQUIRE(d.events().size() == 1);
  CHECK(d.events()[0] == SignChange{5, 11});
  d.step(6, 13, 0);
  d.step(7, 17, -3);
  CHECK(d.events().size() == 1);
  d.step(8, 19, 1);
  CHECK(d.events().size() == 2);
}

TEST_CASE("mod 6 race over 50000 primes matches the golden trajectory") {
  auto s = count_stream(50'000);
  const RaceResult r = delta_series(s, 6, 100);
  REQUIRE(r.samples.size() == 500);
  CHECK(r.samples.front() == DeltaSample{100, 541, 47, 51, 4});
  CHECK(r.samples.back() == DeltaSample{50'000, 611'953, 24'957, 25'041, 84});
  CHECK(r.summary.final == r.samples.back());
  CHECK(r.summary.min_delta == 0);
  CHECK(r.summary.min_delta_np == 1);
  CHECK(r.summary.max_delta == 86);
  CHECK(r.summary.max_delta_np == 34'310);
  CHECK(r.summary.sign_changes.empty());
}

TEST_CASE("mod 6 deltas at larger checkpoints") {
  auto s = count_stream(100'000);
  const RaceResult r = delta_series(s, 6, 100'000);
  REQUIRE(r.samples.size() == 1);
  CHECK(r.samples[0].prime == 1'299'709);
  CHECK(r.samples[0].delta == 76);
}

TEST_CASE("mod 4 race shows the first negative excursion") {
  auto s = value_stream(30'000);
  RaceCounters c(4);
  const RaceSummary summary = run_race(s, c, 1);
  CHECK(c.np() == 3245);
  CHECK(c.neither() == 1);  // only the prime 2
  CHECK(summary.final.delta == 22);
  CHECK(summary.min_delta == -1);
  CHECK(summary.min_delta_np == 2946);
  REQUIRE(summary.sign_changes.size() == 2);
  CHECK(summary.sign_changes[0] == SignChange{2946, 26'861});
  CHECK(summary.sign_changes[1] == SignChange{2948, 26'879});
}

TEST_CASE("run_race sampling stride and final row") {
  auto s = count_stream(1050);
  RaceCounters c;
  std::vector<DeltaSample> rows;
  run_race(s, c, 100, [&rows](const RaceCounters& rc) { rows.push_back(rc.sample()); });
  // 10 on-stride rows plus the off-stride final prime.
  REQUIRE(rows.size() == 11);
  CHECK(rows[9].np == 1000);
  CHECK(rows[10].np == 1050);

  auto s2 = count_stream(1000);
  RaceCounters c2;
  std::vector<DeltaSample> rows2;
  run_race(s2, c2, 100, [&rows2](const RaceCounters& rc) { rows2.push_back(rc.sample()); });
  CHECK(rows2.size() == 10);  // final row is on-stride, not duplicated
}

TEST_CASE("delta series rejects moduli without exactly two classes") {
  auto s = count_stream(10);
  CHECK_THROWS_AS(delta_series(s, 8, 1), std::invalid_argument);
}

TEST_CASE("race counters restore round trip") {
  RaceCounters c;
  auto s = count_stream(1000);
  while (auto p = s.next()) c.accumulate(*p);

  const Checkpoint cp = Checkpoint::capture(c);
  CHECK(cp.np == 1000);
  CHECK(cp.next_position == c.last_prime() + 1);
  RaceCounters back = cp.restore();
  CHECK(back.np() == c.np());
  CHECK(back.count_low() == c.count_low());
  CHECK(back.count_high() == c.count_high());
  CHECK(back.neither() == c.neither());
  CHECK(back.last_prime() == c.last_prime());

  // Continuing from the snapshot matches a straight 2000-prime run.
  SieveConfig cfg;
  cfg.limit = MaxCount{1000};
  PrimeStream tail(cfg, cp.next_position, cp.np);
  while (auto p = tail.next()) back.accumulate(*p);

  RaceCounters straight;
  auto s2 = count_stream(2000);
  while (auto p = s2.next()) straight.accumulate(*p);
  CHECK(back.np() == straight.np());
  CHECK(back.count_low() == straight.count_low());
  CHECK(back.count_high() == straight.count_high());
  CHECK(back.last_prime() == straight.last_prime());
}

TEST_CASE("checkpoint serialization is bit exact") {
  Checkpoint cp;
  cp.modulus = 6;
  cp.np = 25'000;
  cp.count_low = 12'406;
  cp.count_high = 12'592;
  cp.neither = 2;
  cp.last_prime = 287'117;
  cp.next_position = 287'118;

  const auto bytes = save_checkpoint(cp);
  REQUIRE(bytes.size() == kCheckpointSize);
  CHECK(bytes[0] == 'P');
  CHECK(bytes[4] == 'E');
  CHECK(bytes[5] == 1);  // version, little endian
  CHECK(bytes[6] == 0);
  CHECK(load_checkpoint(bytes) == cp);
  CHECK(save_checkpoint(load_checkpoint(bytes)) == bytes);
}

TEST_CASE("checkpoint rejects malformed input") {
  RaceCounters c;
  c.accumulate(2);
  c.accumulate(3);
  c.accumulate(5);
  const Checkpoint cp = Checkpoint::capture(c);
  auto bytes = save_checkpoint(cp);

  auto expect_kind = [](const std::vector<std::uint8_t>& b,
                        checkpoint_error::kind want) {
    try {
      load_checkpoint(b);
      FAIL_CHECK("expected checkpoint_error");
    } catch (const checkpoint_error& e) {
      CHECK(e.error_kind() == want);
    }
  };

  auto truncated = bytes;
  truncated.pop_back();
  expect_kind(truncated, checkpoint_error::kind::truncated);

  auto wrong_magic = bytes;
  wrong_magic[0] = 'X';
  expect_kind(wrong_magic, checkpoint_error::kind::bad_magic);

  auto wrong_version = bytes;
  wrong_version[5] = 9;
  expect_kind(wrong_version, checkpoint_error::kind::version_mismatch);

  auto flipped = bytes;
  flipped[20] ^= 0xFF;  // inside np
  expect_kind(flipped, checkpoint_error::kind::checksum_mismatch);

  // Consistent checksum over inconsistent counts.
  Checkpoint bad = cp;
  bad.np = cp.np + 1;
  expect_kind(save_checkpoint(bad), checkpoint_error::kind::inconsistent);
}

TEST_CASE("checkpoint file round trip and error mapping") {
  const fs::path dir = fs::temp_directory_path() / "prime_race_test_ckpt";
  fs::create_directories(dir);
  const fs::path path = dir / "state.bin";

  RaceCounters c;
  auto s = count_stream(100);
  while (auto p = s.next()) c.accumulate(*p);
  const Checkpoint cp = Checkpoint::capture(c);
  write_checkpoint_file(path, cp);
  CHECK(fs::file_size(path) == kCheckpointSize);
  CHECK(read_checkpoint_file(path) == cp);

  CHECK_THROWS_AS(read_checkpoint_file(dir / "missing.bin"), std::ios_base::failure);

  std::ofstream junk(dir / "junk.bin", std::ios::binary);
  junk << "not a checkpoint";
  junk.close();
  CHECK_THROWS_AS(read_checkpoint_file(dir / "junk.bin"), checkpoint_error);

  fs::remove_all(dir);
}

TEST_CASE("fresh checkpoint round trips to identity") {
  const Checkpoint fresh;
  CHECK(load_checkpoint(save_checkpoint(fresh)) == fresh);
  RaceCounters c = fresh.restore();
  CHECK(c.np() == 0);
  CHECK(c.delta() == 0);
  c.accumulate(2);
  CHECK(c.np() == 1);
}

TEST_CASE("streaming race matches a direct recount over the sieve") {
  auto s = value_stream(1'000'000);
  RaceCounters c;
  std::int64_t prev_delta = 0;
  run_race(s, c, 1'000'000);
  std::uint64_t c1 = 0, c5 = 0, neither = 0;
  for (const std::uint64_t p : simple_sieve(1'000'000)) {
    switch (classify_residue(p)) {
      case ResidueClass::R1: ++c1; break;
      case ResidueClass::R5: ++c5; break;
      default: ++neither; break;
    }
  }
  CHECK(c.count_low() == c1);
  CHECK(c.count_high() == c5);
  CHECK(c.neither() == neither);
  CHECK(c.np() == c1 + c5 + neither);

  // Deltas move by at most one per prime.
  auto s2 = count_stream(10'000);
  RaceCounters steps;
  while (auto p = s2.next()) {
    steps.accumulate(*p);
    CHECK(std::abs(steps.delta() - prev_delta) <= 1);
    prev_delta = steps.delta();
  }
}

TEST_CASE("capture requires a two class modulus") {
  RaceCounters c(8);
  c.accumulate(2);
  CHECK_THROWS_AS(Checkpoint::capture(c), std::invalid_argument);
}
