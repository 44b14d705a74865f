// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--only 1,5,8] [--slow] [--threads T]
//
// Criterion 9 takes tens of minutes and is skipped unless --slow is given.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "golden.hpp"
#include "oracles.hpp"
#include "polarmwd/bgr.hpp"
#include "polarmwd/codec.hpp"
#include "polarmwd/construction.hpp"
#include "polarmwd/monomial.hpp"
#include "polarmwd/simulation.hpp"
#include "polarmwd_cli/cli.hpp"

using namespace polarmwd;

namespace {

// Design SNR of the GA baseline in criterion 8: the GA is run near the
// operating point of the target BLER.
constexpr double kGaDesignSnrDb = 4.0;
// Design SNR of the BGR entropy evaluation in criterion 9.
constexpr double kBgrDesignSnrDb = 2.75;
constexpr std::uint64_t kSeed = 2024;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  bool slow;
  std::function<Outcome()> run;
};

unsigned g_threads = 1;

std::string fmt(const char* format, double a) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, format, a);
  return buffer;
}

std::vector<int> as_ints(const ReliabilitySequence& s) { return {s.order().begin(), s.order().end()}; }

Outcome golden_sequences() {
  const bool small = as_ints(mwd_sequence(CodeParams(2))) == golden::kFig1N4 &&
                     as_ints(mwd_sequence(CodeParams(3))) == golden::kFig1N8 &&
                     as_ints(mwd_sequence(CodeParams(4))) == golden::kFig1N16;
  const bool t128 = as_ints(mwd_sequence(CodeParams(7))) == golden::read_columns(golden::kTable128);
  const bool t256 = as_ints(mwd_sequence(CodeParams(8))) == golden::read_columns(golden::kTable256);
  return {small && t128 && t256, std::string("N=4/8/16 ") + (small ? "match" : "DIFFER") + ", N=128 " +
                                      (t128 ? "match" : "DIFFER") + ", N=256 " + (t256 ? "match" : "DIFFER")};
}

Outcome nestedness() {
  int failures = 0;
  for (int n = 2; n <= 7; ++n) {
    const auto longer = mwd_sequence(CodeParams(n + 1));
    std::vector<int> induced;
    for (ChannelIndex i : longer.order()) {
      if (i < (ChannelIndex{1} << n)) induced.push_back(static_cast<int>(i));
    }
    if (induced != as_ints(mwd_sequence(CodeParams(n)))) ++failures;
  }
  return {failures == 0, std::to_string(6 - failures) + "/6 adjacent pairs nested"};
}

Outcome closed_form_vs_enumeration() {
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  auto compare = [&](const std::vector<std::uint8_t>& member, int n) {
    const InformationSet set(CodeParams(n), oracle::members_of(member));
    ++checked;
    if (mwd_of(set) != brute_force_mwd(set)) ++mismatches;
  };
  for (int n = 2; n <= 4; ++n) {
    for (const auto& member : oracle::all_decreasing_sets(n)) compare(member, n);
  }
  std::mt19937_64 rng(kSeed);
  for (int t = 0; t < 200; ++t) compare(oracle::random_decreasing_set(5, 20, rng), 5);
  return {mismatches == 0 && checked >= 200,
          std::to_string(checked) + " decreasing sets, " + std::to_string(mismatches) + " mismatches"};
}

Outcome lemma3_optimality() {
  std::size_t violations = 0;
  std::size_t compared = 0;
  for (int n = 1; n <= 4; ++n) {
    const CodeParams p(n);
    const auto q = mwd_sequence(p);
    const auto sets = oracle::all_decreasing_sets(n);
    for (std::size_t k = 1; k <= p.length(); ++k) {
      const auto mine = std::get<MwdSummary>(mwd_of(information_set_from_sequence(q, k)));
      for (const auto& member : sets) {
        const auto rows = oracle::members_of(member);
        if (rows.size() != k) continue;
        const auto other = oracle::min_weight_by_enumeration(rows, n);
        ++compared;
        if (other.d_min > mine.d_min || (other.d_min == mine.d_min && other.a_dmin < mine.a_dmin)) ++violations;
      }
    }
  }
  return {violations == 0,
          std::to_string(compared) + " (K, decreasing set) pairs, " + std::to_string(violations) + " better than MWD"};
}

Outcome fig2_example() {
  BgrConfig cfg;
  cfg.params = CodeParams(5);
  cfg.k = 16;
  cfg.list_size = 2;
  cfg.design_snr_db = 1.25;
  const auto h = bgr_entropies(cfg);
  cfg.reorder_rule = ReorderRule::kEntropy;
  const auto mwd_rule = bgr_construct(cfg, h);
  cfg.reorder_rule = ReorderRule::kPwSequence;
  const auto pw_rule = bgr_construct(cfg, h);

  const InformationSet expected(cfg.params, {golden::kExampleBgrSet.begin(), golden::kExampleBgrSet.end()});
  const InformationSet start(cfg.params, {golden::kExampleMwdSet.begin(), golden::kExampleMwdSet.end()});
  const double h_start = entropy_of_set(h, start);
  const double h_end = entropy_of_set(h, expected);
  const bool sets = mwd_rule.set == expected && pw_rule.set == expected;
  const bool entropies = std::abs(h_start - golden::kExampleMwdEntropy) <= 0.05 &&
                         std::abs(h_end - golden::kExampleBgrEntropy) <= 0.05;
  return {sets && entropies, std::string("BGR-MWD set ") + (mwd_rule.set == expected ? "matches" : "DIFFERS") +
                                 ", BGR-MWD-PW set " + (pw_rule.set == expected ? "matches" : "DIFFERS") +
                                 ", H = " + fmt("%.4f", h_start) + " / " + fmt("%.4f", h_end) +
                                 " (expected 1.064 / 0.993 +/- 0.05)"};
}

Outcome decoder_equivalences() {
  const auto set = information_set_from_sequence(mwd_sequence(CodeParams(7)), 64);
  const auto ch = ChannelModel::make(2.0, 0.5);
  ScDecoder sc(set);
  SclDecoder scl1(set, 1);
  std::size_t sc_diff = 0;
  for (std::uint64_t f = 0; f < 10000; ++f) {
    const auto frame = draw_frame(set, ch, frame_seed(kSeed, f));
    if (sc.decode(frame.llrs).info_bits != scl1.decode(frame.llrs).info_bits) ++sc_diff;
  }

  const auto small = information_set_from_sequence(mwd_sequence(CodeParams(3)), 4);
  const auto ch_small = ChannelModel::make(1.0, 0.5);
  SclDecoder full(small, 16);
  oracle::BruteForceMl ml(small);
  std::size_t ml_diff = 0;
  for (std::uint64_t f = 0; f < 10000; ++f) {
    const auto frame = draw_frame(small, ch_small, frame_seed(kSeed + 1, f));
    if (full.decode(frame.llrs).info_bits != ml.decode(frame.llrs)) ++ml_diff;
  }
  return {sc_diff == 0 && ml_diff == 0, "SC vs SCL(1): " + std::to_string(sc_diff) +
                                            "/10000 differ; SCL(16) vs ML at (8,4): " + std::to_string(ml_diff) +
                                            "/10000 differ"};
}

Outcome repetition_anchor() {
  const InformationSet set(CodeParams(3), {7});
  SimulationOptions o;
  o.stop.max_frames = 100000;
  o.stop.target_errors = o.stop.max_frames + 1;
  o.master_seed = kSeed;
  o.threads = g_threads;
  const auto p = simulate_bler(set, make_decoder_factory(set, 1), 0.0, o);
  const double expected = q_function(std::sqrt(2.0));
  const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(p.frames));
  const double z = (p.bler - expected) / se;
  return {std::abs(z) <= 3.0, "BLER " + fmt("%.5f", p.bler) + " over " + std::to_string(p.frames) +
                                  " frames vs Q(sqrt 2) = " + fmt("%.5f", expected) + " (" + fmt("%+.2f", z) +
                                  " SE)"};
}

std::string probes_summary(const RequiredSnrResult& r) {
  std::string s;
  for (const auto& p : r.probes) {
    s += (s.empty() ? "" : " ") + fmt("%.1f", p.ebn0_db) + ":" + std::to_string(p.errors) + "/" +
         std::to_string(p.frames);
  }
  return s;
}

Outcome mwd_vs_ga_n128() {
  const CodeParams p(7);
  const std::size_t k = 96;
  const auto mwd_set = information_set_from_sequence(mwd_sequence(p), k);
  const auto ga_set = information_set_from_sequence(ga_sequence(ga_llr_means(p, kGaDesignSnrDb, 0.75)), k);
  const auto mwd = required_snr(mwd_set, make_decoder_factory(mwd_set, 8), 1e-3, 2.5, 6.5, kSeed, g_threads);
  const auto ga = required_snr(ga_set, make_decoder_factory(ga_set, 8), 1e-3, 2.5, 6.5, kSeed, g_threads);
  const double gap = ga.ebn0_db - mwd.ebn0_db;
  std::printf("      MWD probes (dB:errors/frames): %s\n", probes_summary(mwd).c_str());
  std::printf("      GA  probes (dB:errors/frames): %s\n", probes_summary(ga).c_str());
  return {gap >= 0.3 - 1e-9, "required Eb/N0 at BLER 1e-3: MWD " + fmt("%.1f", mwd.ebn0_db) + " dB, GA(" +
                                 fmt("%.1f", kGaDesignSnrDb) + " dB design) " + fmt("%.1f", ga.ebn0_db) +
                                 " dB, gap " + fmt("%.2f", gap) + " dB (need >= 0.30)"};
}

Outcome bgr_vs_mwd_n1024() {
  const CodeParams p(10);
  const std::size_t k = 768;
  const std::size_t list = 32;
  const auto mwd_set = information_set_from_sequence(mwd_sequence(p), k);
  BgrConfig cfg;
  cfg.params = p;
  cfg.k = k;
  cfg.list_size = list;
  cfg.design_snr_db = kBgrDesignSnrDb;
  const auto bgr = bgr_mwd(cfg);
  std::printf("      BGR-MWD at %.2f dB design: %zu passes, H %.3f -> %.3f bits, %s\n", kBgrDesignSnrDb,
              bgr.trace.iterations.size(), bgr.trace.initial_entropy_bits,
              bgr.trace.iterations.empty() ? bgr.trace.initial_entropy_bits : bgr.trace.iterations.back().entropy_bits,
              to_string(bgr.trace.termination));
  const auto mwd = required_snr(mwd_set, make_decoder_factory(mwd_set, list), 1e-2, 1.5, 4.5, kSeed, g_threads);
  const auto ours = required_snr(bgr.set, make_decoder_factory(bgr.set, list), 1e-2, 1.5, 4.5, kSeed, g_threads);
  const double gap = mwd.ebn0_db - ours.ebn0_db;
  std::printf("      MWD probes (dB:errors/frames): %s\n", probes_summary(mwd).c_str());
  std::printf("      BGR probes (dB:errors/frames): %s\n", probes_summary(ours).c_str());
  return {gap >= 0.3 - 1e-9, "required Eb/N0 at BLER 1e-2: MWD " + fmt("%.1f", mwd.ebn0_db) + " dB, BGR-MWD " +
                                 fmt("%.1f", ours.ebn0_db) + " dB, gap " + fmt("%.2f", gap) + " dB (need >= 0.30)"};
}

Outcome property_suites() {
  static const char* const kSuites[] = {"test_monomial", "test_construction", "test_bgr",
                                        "test_codec",    "test_simulation",   "test_cli"};
  const std::filesystem::path dir = POLARMWD_UNIT_TEST_DIR;
  int failed = 0;
  std::string failures;
  for (const char* suite : kSuites) {
    const std::string command = "\"" + (dir / suite).string() + "\" --minimal > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    std::printf("      %-18s %s\n", suite, status == 0 ? "ok" : "FAILED");
    if (status != 0) {
      ++failed;
      failures += std::string(" ") + suite;
    }
  }
  return {failed == 0, std::to_string(std::size(kSuites) - failed) + "/" + std::to_string(std::size(kSuites)) +
                           " invariant suites pass" + (failed != 0 ? " (failed:" + failures + ")" : "")};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome rerun_reproducibility() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "polarmwd_acceptance_rerun";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string out = (dir / "sim.csv").string();
  std::ostringstream sink;
  const int first = cli::run({"simulate", "--n", "7", "--k", "64", "--method", "mwd", "--list-size", "8",
                              "--ebn0-db", "2.5,3.0", "--max-frames", "100000", "--target-errors", "100", "--seed",
                              "1", "--threads", "1", "--out", out},
                             sink, sink);
  bool identical = first == 0;
  std::string detail;
  for (unsigned threads : {2u, 3u, 8u}) {
    const std::string rerun_out = (dir / ("sim.t" + std::to_string(threads) + ".csv")).string();
    std::ostringstream log;
    const int code = cli::run({"rerun", "--manifest", out + ".manifest.json", "--threads", std::to_string(threads),
                               "--out", rerun_out},
                              log, sink);
    const bool same = code == 0 && slurp(rerun_out) == slurp(out);
    identical = identical && same;
    detail += (detail.empty() ? "" : ", ") + std::string("threads=") + std::to_string(threads) + " " +
              (same ? "identical" : "DIFFERENT");
  }
  fs::remove_all(dir);
  return {identical, "simulate rerun from manifest: " + detail};
}

std::set<int> parse_ids(const std::string& text) {
  std::set<int> ids;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) ids.insert(std::stoi(item));
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  bool slow = false;
  g_threads = std::max(1u, std::thread::hardware_concurrency());
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--slow") {
      slow = true;
    } else if (arg == "--only" && i + 1 < argc) {
      only = parse_ids(argv[++i]);
    } else if (arg == "--threads" && i + 1 < argc) {
      g_threads = static_cast<unsigned>(std::max(1, std::stoi(argv[++i])));
    } else {
      std::fprintf(stderr, "usage: %s [--only 1,2,...] [--slow] [--threads T]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "golden MWD sequences (N = 4, 8, 16, 128, 256)", false, golden_sequences},
      {2, "MWD sequence nestedness, N = 4 ... 256", false, nestedness},
      {3, "closed-form MWD equals codeword enumeration", false, closed_form_vs_enumeration},
      {4, "MWD-sequence sets are MWD-optimal (n <= 4)", false, lemma3_optimality},
      {5, "BGR example at N=32, K=16, L=2, 1.25 dB", false, fig2_example},
      {6, "decoder equivalences (SC = SCL(1), SCL(2^K) = ML)", false, decoder_equivalences},
      {7, "repetition (8,1) BLER at 0 dB equals Q(sqrt 2)", false, repetition_anchor},
      {8, "N=128 R=0.75 L=8: MWD beats GA by >= 0.3 dB at BLER 1e-3", false, mwd_vs_ga_n128},
      {9, "N=1024 K=768 L=32: BGR-MWD beats MWD by >= 0.3 dB at BLER 1e-2", true, bgr_vs_mwd_n1024},
      {10, "invariant suites of every module", false, property_suites},
      {11, "simulate reruns reproduce counts for any thread count", false, rerun_reproducibility},
  };

  int failed = 0;
  std::printf("acceptance: %u worker thread(s)\n", g_threads);
  for (const auto& c : criteria) {
    if (!only.empty() && only.count(c.id) == 0) continue;
    if (c.slow && !slow) {
      std::printf("SKIP  [%d] %s (slow; run with --slow)\n", c.id, c.title);
      continue;
    }
    std::fflush(stdout);
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  [%d] %s: %s (%.1f s)\n", outcome.pass ? "PASS" : "FAIL", c.id, c.title, outcome.detail.c_str(),
                seconds);
    std::fflush(stdout);
    if (!outcome.pass) ++failed;
  }
  std::printf("%d criterion(s) failed\n", failed);
  return failed == 0 ? 0 : 1;
}
