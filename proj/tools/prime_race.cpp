// prime_race: mod-6 prime race toolkit.
//
// Subcommands: race, products, census, verify, plot. Exit codes:
//   0 success, 2 invalid configuration, 3 I/O failure,
//   4 checkpoint corruption, 5 verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "prime_race/checkpoint.hpp"
#include "prime_race/products.hpp"
#include "prime_race/race.hpp"
#include "prime_race/sieve.hpp"

namespace fs = std::filesystem;
using namespace prime_race;

namespace {

constexpr int kExitVerificationFailure = 5;

// Fault hooks for the exit-code contract tests. Production runs leave the
// variable unset and take the straight path.
bool fault_enabled(const char* name) {
  const char* v = std::getenv("PRIME_RACE_FAULT_INJECT");
  return v != nullptr && std::string_view(v) == name;
}

std::ofstream open_output(const fs::path& path, bool append) {
  std::ofstream out(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
  if (!out) throw std::ios_base::failure("cannot open for writing: " + path.string());
  return out;
}

void flush_checked(std::ostream& os, const std::string& what) {
  os.flush();
  if (!os) throw std::ios_base::failure("write failure on " + what);
}

std::string csv_header(const RaceCounters& c) {
  std::string h = "np,prime";
  for (const std::uint64_t r : c.residues()) h += ",count" + std::to_string(r);
  if (c.two_class()) h += ",delta";
  return h;
}

void write_csv_row(std::ostream& os, const RaceCounters& c) {
  os << c.np() << ',' << c.last_prime();
  for (const std::uint64_t v : c.counts()) os << ',' << v;
  if (c.two_class()) os << ',' << c.delta();
  os << '\n';
}

void write_race_summary(std::ostream& os, const RaceCounters& c,
                        const RaceSummary& s) {
  os << "command: race\n";
  os << "modulus: " << c.modulus() << '\n';
  os << "np: " << c.np() << '\n';
  os << "final_prime: " << c.last_prime() << '\n';
  const auto& residues = c.residues();
  const auto& counts = c.counts();
  for (std::size_t i = 0; i < residues.size(); ++i) {
    os << "count" << residues[i] << ": " << counts[i] << '\n';
  }
  os << "neither: " << c.neither() << '\n';
  if (c.two_class()) {
    os << "final_delta: " << c.delta() << '\n';
    os << "min_delta: " << s.min_delta << '\n';
    os << "min_delta_np: " << s.min_delta_np << '\n';
    os << "max_delta: " << s.max_delta << '\n';
    os << "max_delta_np: " << s.max_delta_np << '\n';
    os << "sign_changes: " << s.sign_changes.size() << '\n';
    os << "sign_convention: delta = count" << residues[1] << " - count"
       << residues[0] << '\n';
  }
}

struct RaceOptions {
  std::uint64_t nprimes = 0;
  std::uint64_t limit = 0;
  bool has_nprimes = false;
  bool has_limit = false;
  std::uint64_t modulus = 6;
  std::uint64_t stride = 1000;
  std::uint64_t segment = kDefaultSegmentLength;
  std::string out;
  std::string checkpoint;
  bool resume = false;
  unsigned threads = 1;
};

int cmd_race(const RaceOptions& opt) {
  if (opt.has_nprimes == opt.has_limit) {
    throw std::invalid_argument("exactly one of --nprimes and --limit is required");
  }
  if (opt.resume && opt.checkpoint.empty()) {
    throw std::invalid_argument("--resume requires --checkpoint");
  }

  RaceCounters counters(opt.modulus);
  if (!opt.checkpoint.empty() && !counters.two_class()) {
    throw std::invalid_argument("checkpointing supports two-class moduli only");
  }
  std::uint64_t start_value = 2;
  std::uint64_t preceding = 0;
  if (opt.resume) {
    const Checkpoint cp = read_checkpoint_file(opt.checkpoint);
    if (cp.modulus != opt.modulus) {
      throw std::invalid_argument(
          "checkpoint modulus " + std::to_string(cp.modulus) +
          " does not match --modulus " + std::to_string(opt.modulus));
    }
    counters = cp.restore();
    start_value = cp.next_position;
    preceding = cp.np;
  }

  SieveConfig cfg;
  cfg.segment_length = opt.segment;
  bool nothing_to_do = false;
  if (opt.has_nprimes) {
    if (opt.nprimes < preceding) {
      throw std::invalid_argument("checkpoint already covers more than --nprimes");
    }
    nothing_to_do = opt.nprimes == preceding;
    cfg.limit = MaxCount{nothing_to_do ? 1 : opt.nprimes - preceding};
  } else {
    cfg.limit = MaxValue{opt.limit};
    nothing_to_do = opt.limit < start_value;
  }

  std::ofstream file;
  const bool csv_to_stdout = opt.out.empty();
  std::ostream& csv = csv_to_stdout ? std::cout
                                    : (file = open_output(opt.out, opt.resume), file);
  if (!opt.resume) {
    csv << csv_header(counters) << '\n';
  }

  RaceSummary summary;
  if (nothing_to_do) {
    summary.two_class = counters.two_class();
    if (summary.two_class) {
      summary.final = counters.np() ? counters.sample() : DeltaSample{};
      summary.min_delta = summary.max_delta = counters.np() ? counters.delta() : 0;
      summary.min_delta_np = summary.max_delta_np = counters.np();
    }
  } else {
    PrimeStream stream(cfg, start_value, preceding, opt.threads);
    summary = run_race(stream, counters, opt.stride,
                       [&csv](const RaceCounters& c) { write_csv_row(csv, c); });
  }
  flush_checked(csv, csv_to_stdout ? "standard output" : opt.out);

  if (!opt.checkpoint.empty()) {
    write_checkpoint_file(opt.checkpoint, Checkpoint::capture(counters));
  }

  std::ostream& sum = csv_to_stdout ? std::cerr : std::cout;
  write_race_summary(sum, counters, summary);
  flush_checked(sum, "summary output");
  return 0;
}

int cmd_products(std::uint64_t n_max, const std::string& out_path) {
  const bool corrupt = fault_enabled("product-closed-form");
  std::ofstream file;
  const bool to_stdout = out_path.empty();
  std::ostream& table = to_stdout ? std::cout
                                  : (file = open_output(out_path, false), file);
  table << "n,same_closed,same_enumerated,cross_closed,cross_enumerated,status\n";
  std::uint64_t failures = 0;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    ProductCountReport r = enumerate_products(n);
    if (corrupt) ++r.same_class_closed;
    if (!r.consistent()) ++failures;
    table << r.n << ',' << r.same_class_closed << ',' << r.same_class_enumerated
          << ',' << r.cross_class_closed << ',' << r.cross_class_enumerated
          << ',' << (r.consistent() ? "PASS" : "FAIL") << '\n';
  }
  flush_checked(table, to_stdout ? "standard output" : out_path);

  std::ostream& sum = to_stdout ? std::cerr : std::cout;
  sum << "command: products\n";
  sum << "n_max: " << n_max << '\n';
  sum << "rows: " << n_max + 1 << '\n';
  sum << "failures: " << failures << '\n';
  sum << "result: " << (failures == 0 ? "PASS" : "FAIL") << '\n';
  flush_checked(sum, "summary output");
  return failures == 0 ? 0 : kExitVerificationFailure;
}

int cmd_census(std::uint64_t limit, const std::string& out_path) {
  CensusReport report = composite_census(limit);
  if (fault_enabled("census-identity")) ++report.r1.composites;

  std::ostream& sum = std::cout;
  sum << "command: census\n";
  sum << "limit: " << report.bound << '\n';
  sum << "r1_total: " << report.r1.total << '\n';
  sum << "r1_primes: " << report.r1.primes << '\n';
  sum << "r1_composites: " << report.r1.composites << '\n';
  sum << "r5_total: " << report.r5.total << '\n';
  sum << "r5_primes: " << report.r5.primes << '\n';
  sum << "r5_composites: " << report.r5.composites << '\n';
  sum << "unit_in_r1: " << (report.unit_counted ? 1 : 0) << '\n';

  if (!out_path.empty()) {
    if (limit <= kMultiplicityCap) {
      std::ofstream file = open_output(out_path, false);
      file << "class,multiplicity,count\n";
      for (const ResidueClass cls : {ResidueClass::R1, ResidueClass::R5}) {
        for (const auto& [r, count] : multiplicity_histogram(limit, cls)) {
          file << to_string(cls) << ',' << r << ',' << count << '\n';
        }
      }
      flush_checked(file, out_path);
      sum << "histogram: " << out_path << '\n';
    } else {
      sum << "histogram: skipped (limit exceeds " << kMultiplicityCap << ")\n";
    }
  } else {
    sum << "histogram: none\n";
  }

  const bool ok = report.identity_holds();
  sum << "identity: " << (ok ? "PASS" : "FAIL") << '\n';
  flush_checked(sum, "summary output");
  return ok ? 0 : kExitVerificationFailure;
}

int cmd_verify(std::uint64_t limit, std::uint64_t segment, unsigned threads) {
  if (limit < 2 || limit > kSimpleSieveCap) {
    throw std::invalid_argument("--limit must be in [2, 1e9]");
  }
  const std::vector<std::uint64_t> simple = simple_sieve(limit);

  SieveConfig cfg;
  cfg.limit = MaxValue{limit};
  cfg.segment_length = segment;
  PrimeStream stream(cfg, 2, 0, threads);
  bool segmented_ok = true;
  std::size_t i = 0;
  while (auto p = stream.next()) {
    if (i >= simple.size() || simple[i] != *p) {
      segmented_ok = false;
      break;
    }
    ++i;
  }
  segmented_ok = segmented_ok && i == simple.size();

  const std::uint64_t trial_bound = std::min(limit, kTrialDivisionCap);
  const std::vector<std::uint64_t> trial = trial_division_oracle(trial_bound);
  std::size_t prefix = 0;
  while (prefix < simple.size() && simple[prefix] <= trial_bound) ++prefix;
  const bool trial_ok =
      trial.size() == prefix &&
      std::equal(trial.begin(), trial.end(), simple.begin());

  std::cout << "command: verify\n";
  std::cout << "limit: " << limit << '\n';
  std::cout << "primes_found: " << simple.size() << '\n';
  std::cout << "segmented_vs_simple: " << (segmented_ok ? "PASS" : "FAIL") << '\n';
  std::cout << "trial_bound: " << trial_bound << '\n';
  std::cout << "trial_vs_simple: " << (trial_ok ? "PASS" : "FAIL") << '\n';
  flush_checked(std::cout, "summary output");
  return segmented_ok && trial_ok ? 0 : kExitVerificationFailure;
}

int cmd_plot(const std::string& csv_path, std::string script_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open CSV: " + csv_path);
  std::string header;
  if (!std::getline(in, header)) {
    throw std::invalid_argument("CSV is empty: " + csv_path);
  }
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header.rfind("np,prime,", 0) != 0) {
    throw std::invalid_argument("unexpected CSV header: " + header);
  }
  int delta_column = -1;
  {
    std::istringstream cols(header);
    std::string col;
    for (int idx = 1; std::getline(cols, col, ','); ++idx) {
      if (col == "delta") delta_column = idx;
    }
  }
  if (delta_column < 0) {
    throw std::invalid_argument("CSV has no delta column: " + csv_path);
  }
  std::string first_row;
  if (!std::getline(in, first_row) || first_row.empty()) {
    throw std::invalid_argument("CSV has no data rows: " + csv_path);
  }

  if (script_path.empty()) {
    script_path = fs::path(csv_path).replace_extension(".gp").string();
  }
  fs::path script_dir = fs::absolute(script_path).parent_path();
  const fs::path csv_rel = fs::proximate(fs::absolute(csv_path), script_dir);
  const std::string png = fs::path(csv_rel).replace_extension(".png").string();

  std::ofstream out = open_output(script_path, false);
  out << "#!/usr/bin/env gnuplot\n";
  out << "set datafile separator \",\"\n";
  out << "set terminal pngcairo size 1280,720\n";
  out << "set output \"" << png << "\"\n";
  out << "set xlabel \"Np\"\n";
  out << "set ylabel \"delta\"\n";
  out << "set grid\n";
  out << "set key top left\n";
  out << "plot \"" << csv_rel.string() << "\" using 1:" << delta_column
      << " with lines lw 2 title \"delta\"\n";
  flush_checked(out, script_path);

  std::cout << "command: plot\n";
  std::cout << "csv: " << csv_path << '\n';
  std::cout << "script: " << script_path << '\n';
  std::cout << "delta_column: " << delta_column << '\n';
  flush_checked(std::cout, "summary output");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prime race toolkit: races, product checks, censuses, plots"};
  app.require_subcommand(1);

  RaceOptions race_opt;
  CLI::App* race = app.add_subcommand("race", "run a residue-class prime race");
  auto* np_opt = race->add_option("--nprimes", race_opt.nprimes,
                                  "stop after this many primes (total)")
                     ->check(CLI::PositiveNumber);
  auto* lim_opt = race->add_option("--limit", race_opt.limit,
                                   "stop after the last prime <= this value")
                      ->check(CLI::PositiveNumber);
  np_opt->excludes(lim_opt);
  lim_opt->excludes(np_opt);
  race->add_option("--modulus", race_opt.modulus, "race modulus (default 6)")
      ->check(CLI::Range(std::uint64_t{3}, std::uint64_t{1'000'000}));
  race->add_option("--sample-every", race_opt.stride,
                   "CSV sampling stride in primes (default 1000)")
      ->check(CLI::PositiveNumber);
  race->add_option("--segment-size", race_opt.segment,
                   "sieve segment length (default 1048576)");
  race->add_option("--out", race_opt.out, "CSV output path (default stdout)");
  race->add_option("--checkpoint", race_opt.checkpoint,
                   "checkpoint file, written on completion");
  race->add_flag("--resume", race_opt.resume,
                 "continue from --checkpoint, appending CSV rows");
  race->add_option("--threads", race_opt.threads, "sieve worker count")
      ->envname("PRIME_RACE_THREADS")
      ->check(CLI::Range(1u, 1024u));

  std::uint64_t n_max = 200;
  std::string products_out;
  CLI::App* products =
      app.add_subcommand("products", "verify product-count closed forms");
  products->add_option("--n-max", n_max, "verify depths 0..n (default 200)")
      ->check(CLI::Range(std::uint64_t{0}, kEnumerateCap));
  products->add_option("--out", products_out, "table output path (default stdout)");

  std::uint64_t census_limit = 0;
  std::string census_out;
  CLI::App* census =
      app.add_subcommand("census", "count primes and composites per class");
  census->add_option("--limit", census_limit, "census bound")
      ->required()
      ->check(CLI::PositiveNumber);
  census->add_option("--out", census_out, "multiplicity histogram CSV path");

  std::uint64_t verify_limit = 1'000'000;
  std::uint64_t verify_segment = kDefaultSegmentLength;
  unsigned verify_threads = 1;
  CLI::App* verify =
      app.add_subcommand("verify", "cross-validate the sieve implementations");
  verify->add_option("--limit", verify_limit, "verification bound (default 1e6)");
  verify->add_option("--segment-size", verify_segment, "sieve segment length");
  verify->add_option("--threads", verify_threads, "sieve worker count")
      ->envname("PRIME_RACE_THREADS")
      ->check(CLI::Range(1u, 1024u));

  std::string plot_csv;
  std::string plot_out;
  CLI::App* plot =
      app.add_subcommand("plot", "emit a gnuplot script for a race CSV");
  plot->add_option("--csv", plot_csv, "race CSV to plot")->required();
  plot->add_option("--out", plot_out, "script path (default: CSV with .gp)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    race_opt.has_nprimes = np_opt->count() > 0;
    race_opt.has_limit = lim_opt->count() > 0;
    if (race->parsed()) return cmd_race(race_opt);
    if (products->parsed()) return cmd_products(n_max, products_out);
    if (census->parsed()) return cmd_census(census_limit, census_out);
    if (verify->parsed()) return cmd_verify(verify_limit, verify_segment, verify_threads);
    if (plot->parsed()) return cmd_plot(plot_csv, plot_out);
    std::cerr << app.help();
    return 2;
  } catch (const checkpoint_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
