#include "polarmwd_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "polarmwd/bgr.hpp"
#include "polarmwd/construction.hpp"
#include "polarmwd/errors.hpp"
#include "polarmwd/monomial.hpp"
#include "polarmwd/simulation.hpp"

namespace polarmwd::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Flag combinations CLI11 cannot express on its own.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.10g", value);
  return buffer;
}

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, separator)) parts.push_back(part);
  return parts;
}

double parse_double(const std::string& text) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(value)) throw UsageError("not a finite number: '" + text + "'");
    return value;
  } catch (const std::logic_error&) {
    throw UsageError("not a number: '" + text + "'");
  }
}

// "a:step:b" (inclusive), "x,y,z" or a single value.
std::vector<double> parse_grid(const std::string& text) {
  const auto range = split(text, ':');
  if (range.size() == 3) {
    const double lo = parse_double(range[0]);
    const double step = parse_double(range[1]);
    const double hi = parse_double(range[2]);
    if (!(step > 0.0) || hi < lo) throw UsageError("grid 'a:step:b' needs step > 0 and a <= b");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    if (count > 100000) throw UsageError("grid has too many points");
    std::vector<double> grid;
    for (long i = 0; i <= count; ++i) grid.push_back(std::round((lo + i * step) * 1e9) / 1e9);
    return grid;
  }
  if (range.size() != 1) throw UsageError("grid must be 'a:step:b' or a comma-separated list");
  std::vector<double> grid;
  for (const auto& item : split(text, ',')) grid.push_back(parse_double(item));
  if (grid.empty()) throw UsageError("empty grid");
  return grid;
}

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// Information-set selection shared by construct, mwd, aub, simulate and
// required-snr.

struct SetOptions {
  int n = 0;
  std::size_t k = 0;
  std::string method = "mwd";
  std::string set_list;
  std::string sequence_file;
  std::optional<double> design_snr_db;
  std::size_t list_size = 0;  // 0 = not given
};

const std::vector<std::string> kSetMethods{"mwd", "ga", "pw", "bgr-mwd", "bgr-mwd-pw", "file"};

void add_set_options(CLI::App* cmd, SetOptions& opts, bool list_size_required) {
  cmd->add_option("--n", opts.n, "log2 of the code length N")->required()->check(CLI::Range(1, 20));
  auto* k = cmd->add_option("--k", opts.k, "information length K")->check(CLI::Range(1, 1 << 20));
  auto* set = cmd->add_option("--set", opts.set_list, "explicit information set, comma-separated");
  cmd->add_option("--method", opts.method, "construction method")->check(CLI::IsMember(kSetMethods));
  cmd->add_option("--sequence-file", opts.sequence_file, "reliability sequence for --method file");
  cmd->add_option("--design-snr-db", opts.design_snr_db, "design Eb/N0 in dB (GA and BGR methods)");
  auto* list = cmd->add_option("--list-size", opts.list_size, "list size L")->check(CLI::Range(1, 1 << 20));
  if (list_size_required) list->required();
  k->excludes(set);
}

struct BuiltSet {
  InformationSet set;
  std::optional<BgrTrace> trace;
};

BuiltSet build_set(const SetOptions& opts) {
  const CodeParams params(opts.n);
  if (!opts.set_list.empty()) {
    std::vector<ChannelIndex> order;
    for (const auto& item : split(opts.set_list, ',')) {
      const double value = parse_double(item);
      if (value < 0 || value != std::floor(value) || value >= static_cast<double>(params.length())) {
        throw UsageError("set entry '" + item + "' is not a channel index below N");
      }
      order.push_back(static_cast<ChannelIndex>(value));
    }
    return {InformationSet(params, std::move(order)), std::nullopt};
  }
  if (opts.k == 0) throw UsageError("one of --k or --set is required");
  if (opts.k > params.length()) throw UsageError("--k exceeds N = " + std::to_string(params.length()));

  const double rate = static_cast<double>(opts.k) / static_cast<double>(params.length());
  auto need_snr = [&] {
    if (!opts.design_snr_db) throw UsageError("--method " + opts.method + " requires --design-snr-db");
    return *opts.design_snr_db;
  };

  if (opts.method == "mwd") return {information_set_from_sequence(mwd_sequence(params), opts.k), std::nullopt};
  if (opts.method == "pw") return {information_set_from_sequence(pw_sequence(params), opts.k), std::nullopt};
  if (opts.method == "ga") {
    return {information_set_from_sequence(ga_sequence(ga_llr_means(params, need_snr(), rate)), opts.k),
            std::nullopt};
  }
  if (opts.method == "file") {
    if (opts.sequence_file.empty()) throw UsageError("--method file requires --sequence-file");
    return {information_set_from_sequence(load_sequence_file(opts.sequence_file, params.length()), opts.k),
            std::nullopt};
  }
  if (opts.list_size == 0) throw UsageError("--method " + opts.method + " requires --list-size");
  BgrConfig cfg;
  cfg.params = params;
  cfg.k = opts.k;
  cfg.list_size = opts.list_size;
  cfg.design_snr_db = need_snr();
  BgrResult result = opts.method == "bgr-mwd" ? bgr_mwd(cfg) : bgr_mwd_pw(cfg);
  return {std::move(result.set), std::move(result.trace)};
}

Json set_parameters(const SetOptions& opts) {
  Json json;
  json["n"] = opts.n;
  if (!opts.set_list.empty()) {
    json["set"] = opts.set_list;
  } else {
    json["k"] = opts.k;
    json["method"] = opts.method;
    if (!opts.sequence_file.empty()) json["sequence_file"] = opts.sequence_file;
  }
  if (opts.design_snr_db) json["design_snr_db"] = *opts.design_snr_db;
  if (opts.list_size != 0) json["list_size"] = opts.list_size;
  return json;
}

Json mwd_json(const MwdResult& result) {
  if (std::holds_alternative<EmptyCode>(result)) return Json{{"empty", true}};
  const auto& summary = std::get<MwdSummary>(result);
  return Json{{"d_min", summary.d_min}, {"a_dmin", to_string(summary.a_dmin)}, {"r_max", summary.r_max}};
}

Json trace_json(const BgrTrace& trace) {
  Json json;
  json["initial_entropy_bits"] = trace.initial_entropy_bits;
  json["satisfied"] = trace.satisfied;
  json["termination"] = to_string(trace.termination);
  json["iterations"] = Json::array();
  for (const auto& step : trace.iterations) {
    json["iterations"].push_back(Json{{"a", step.a},
                                      {"b", step.b},
                                      {"entropy_bits", step.entropy_bits},
                                      {"removed", step.removed},
                                      {"added", step.added}});
  }
  return json;
}

std::vector<ChannelIndex> to_vector(std::span<const ChannelIndex> indices) {
  return {indices.begin(), indices.end()};
}

// ---------------------------------------------------------------------------
// Output and manifest handling.

struct CommandOutput {
  std::string content;
  std::string default_name;
  Json parameters;
  std::optional<std::string> console;  // printed instead of the content
};

std::vector<std::string> without_out_flag(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    kept.push_back(args[i]);
  }
  return kept;
}

fs::path resolve_output(const std::string& out, const std::string& default_name) {
  if (!out.empty()) return out;
  const char* dir = std::getenv(kOutDirEnv);
  return (dir != nullptr && *dir != '\0' ? fs::path(dir) : fs::current_path()) / default_name;
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write " + path.string());
  file << content;
  file.flush();
  if (!file) throw IoError("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

void emit(const std::string& command, const std::vector<std::string>& args, const std::string& out_flag,
          const CommandOutput& output, std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  manifest.command = command;
  manifest.args = without_out_flag(args);
  manifest.parameters = output.parameters;
  manifest.output = resolve_output(out_flag, output.default_name);
  manifest.output_digest = hex64(fnv1a64(output.content));
  manifest.timestamp = utc_timestamp();
  write_file(manifest.output, output.content);
  write_manifest(manifest);
  out << (output.console ? *output.console : output.content);
  err << "wrote " << manifest.output.string() << " (manifest " << manifest_path_for(manifest.output).string()
      << ")\n";
}

// ---------------------------------------------------------------------------
// Commands.

struct SequenceOptions {
  int n = 0;
  std::string method = "mwd";
  std::optional<double> design_snr_db;
  std::optional<double> rate;
};

CommandOutput cmd_sequence(const SequenceOptions& opts) {
  const CodeParams params(opts.n);
  Json parameters{{"n", opts.n}, {"method", opts.method}};
  std::optional<ReliabilitySequence> sequence;
  if (opts.method == "mwd") {
    sequence = mwd_sequence(params);
  } else if (opts.method == "pw") {
    sequence = pw_sequence(params);
  } else {
    if (!opts.design_snr_db || !opts.rate) throw UsageError("--method ga requires --design-snr-db and --rate");
    sequence = ga_sequence(ga_llr_means(params, *opts.design_snr_db, *opts.rate));
    parameters["design_snr_db"] = *opts.design_snr_db;
    parameters["rate"] = *opts.rate;
  }
  std::ostringstream file;
  write_sequence(file, *sequence);

  std::ostringstream console;
  const std::size_t shown = std::min<std::size_t>(16, sequence->length());
  for (std::size_t i = 0; i < shown; ++i) console << (i == 0 ? "" : ",") << (*sequence)[i];
  if (shown < sequence->length()) console << ",...";
  console << '\n';
  return {file.str(), "sequence_n" + std::to_string(opts.n) + "_" + opts.method + ".txt", parameters,
          console.str()};
}

CommandOutput cmd_construct(const SetOptions& opts) {
  const BuiltSet built = build_set(opts);
  const InformationSet& set = built.set;
  Json json;
  json["n"] = opts.n;
  json["N"] = set.params().length();
  json["k"] = set.size();
  json["method"] = opts.set_list.empty() ? opts.method : "set";
  json["set"] = to_vector(set.indices());
  json["selection_order"] = to_vector(set.selection_order());
  if (opts.design_snr_db) {
    const double rate = static_cast<double>(set.size()) / static_cast<double>(set.params().length());
    const double h = entropy_of_set(channel_entropies(ga_llr_means(set.params(), *opts.design_snr_db, rate)), set);
    json["design_snr_db"] = *opts.design_snr_db;
    json["entropy_bits"] = h;
    if (opts.list_size != 0) {
      json["list_size"] = opts.list_size;
      json["entropy_constraint_satisfied"] = satisfies_entropy_constraint(opts.list_size, h);
    }
  }
  json["decreasing"] = is_decreasing_set(set);
  json["mwd"] = json["decreasing"].get<bool>() ? mwd_json(mwd_of(set)) : Json(nullptr);
  if (built.trace) json["bgr_trace"] = trace_json(*built.trace);
  return {json.dump(2) + "\n", "construct.json", set_parameters(opts), std::nullopt};
}

struct MwdCommandResult {
  CommandOutput output;
  int exit_code = kOk;
};

MwdCommandResult cmd_mwd(const SetOptions& opts, bool oracle) {
  const InformationSet set = build_set(opts).set;
  const bool decreasing = is_decreasing_set(set);
  if (!decreasing && !oracle) throw NonDecreasingSet();

  Json json;
  json["n"] = opts.n;
  json["set"] = to_vector(set.indices());
  json["decreasing"] = decreasing;
  json["closed_form"] = decreasing ? mwd_json(mwd_of(set)) : Json(nullptr);
  int exit_code = kOk;
  if (oracle) {
    if (set.size() > kMaxBruteForceDimension) {
      throw UsageError("--oracle enumerates 2^K codewords and needs K <= " +
                       std::to_string(kMaxBruteForceDimension));
    }
    const MwdResult brute = brute_force_mwd(set);
    json["oracle"] = mwd_json(brute);
    if (decreasing) {
      const bool agree = brute == mwd_of(set);
      json["agree"] = agree;
      if (!agree) exit_code = kFailure;
    }
  }
  Json parameters = set_parameters(opts);
  parameters["oracle"] = oracle;
  return {{json.dump(2) + "\n", "mwd.json", parameters, std::nullopt}, exit_code};
}

CommandOutput cmd_aub(const SetOptions& opts, const std::string& grid_text) {
  const InformationSet set = build_set(opts).set;
  const auto grid = parse_grid(grid_text);
  std::string csv = "ebn0_db,aub\n";
  for (const AubPoint& point : aub(set, grid)) {
    csv += format_double(point.ebn0_db) + "," + format_double(point.aub) + "\n";
  }
  Json parameters = set_parameters(opts);
  parameters["ebn0_db"] = grid_text;
  return {csv, "aub.csv", parameters, std::nullopt};
}

struct RunOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::uint64_t max_frames = 100000;
  std::uint64_t target_errors = 100;
};

void add_run_options(CLI::App* cmd, RunOptions& run, bool with_max_frames) {
  cmd->add_option("--seed", run.seed, "master seed");
  cmd->add_option("--threads", run.threads, "worker threads (0 = all cores); results do not depend on it");
  cmd->add_option("--target-errors", run.target_errors, "stop after this many frame errors")
      ->check(CLI::PositiveNumber);
  if (with_max_frames) {
    cmd->add_option("--max-frames", run.max_frames, "frame budget per SNR point")->check(CLI::PositiveNumber);
  }
}

CommandOutput cmd_simulate(const SetOptions& opts, const RunOptions& run, const std::string& grid_text,
                           const std::string& format) {
  const InformationSet set = build_set(opts).set;
  const auto grid = parse_grid(grid_text);
  const DecoderFactory decoder = make_decoder_factory(set, opts.list_size);
  SimulationOptions sim;
  sim.stop = {run.max_frames, run.target_errors};
  sim.master_seed = run.seed;
  sim.threads = resolve_threads(run.threads);

  std::vector<BlerPoint> points;
  for (double ebn0_db : grid) points.push_back(simulate_bler(set, decoder, ebn0_db, sim));

  Json parameters = set_parameters(opts);
  parameters["ebn0_db"] = grid_text;
  parameters["max_frames"] = run.max_frames;
  parameters["target_errors"] = run.target_errors;
  parameters["seed"] = run.seed;
  parameters["threads"] = run.threads;
  parameters["format"] = format;

  if (format == "json") {
    Json json;
    json["master_seed"] = run.seed;
    json["points"] = Json::array();
    for (const BlerPoint& p : points) {
      json["points"].push_back(
          Json{{"ebn0_db", p.ebn0_db}, {"frames", p.frames}, {"errors", p.errors}, {"bler", p.bler}});
    }
    return {json.dump(2) + "\n", "simulate.json", parameters, std::nullopt};
  }
  std::string csv = "ebn0_db,frames,errors,bler\n";
  for (const BlerPoint& p : points) {
    csv += format_double(p.ebn0_db) + "," + std::to_string(p.frames) + "," + std::to_string(p.errors) + "," +
           format_double(p.bler) + "\n";
  }
  return {csv, "simulate.csv", parameters, std::nullopt};
}

struct RequiredSnrOptions {
  double target_bler = 0.0;
  double lo_db = 0.0;
  double hi_db = 0.0;
};

CommandOutput cmd_required_snr(const SetOptions& opts, const RunOptions& run, const RequiredSnrOptions& req) {
  const InformationSet set = build_set(opts).set;
  const RequiredSnrResult result =
      required_snr(set, make_decoder_factory(set, opts.list_size), req.target_bler, req.lo_db, req.hi_db, run.seed,
                   resolve_threads(run.threads), run.target_errors);
  Json json;
  json["target_bler"] = req.target_bler;
  json["required_ebn0_db"] = result.ebn0_db;
  json["probes"] = Json::array();
  for (const BlerPoint& p : result.probes) {
    json["probes"].push_back(
        Json{{"ebn0_db", p.ebn0_db}, {"frames", p.frames}, {"errors", p.errors}, {"bler", p.bler}});
  }
  Json parameters = set_parameters(opts);
  parameters["target_bler"] = req.target_bler;
  parameters["lo_db"] = req.lo_db;
  parameters["hi_db"] = req.hi_db;
  parameters["target_errors"] = run.target_errors;
  parameters["seed"] = run.seed;
  parameters["threads"] = run.threads;
  return {json.dump(2) + "\n", "required_snr.json", parameters, std::nullopt};
}

int cmd_rerun(const std::string& manifest_file, std::optional<unsigned> threads, const std::string& out_flag,
              std::ostream& out, std::ostream& err) {
  const RunManifest manifest = read_manifest(manifest_file);
  std::vector<std::string> args;
  for (std::size_t i = 0; i < manifest.args.size(); ++i) {
    if (threads && manifest.args[i] == "--threads") {
      ++i;
      continue;
    }
    if (manifest.args[i] == "rerun") throw UsageError("manifest describes a rerun");
    args.push_back(manifest.args[i]);
  }
  if (threads) {
    args.push_back("--threads");
    args.push_back(std::to_string(*threads));
  }
  fs::path target = out_flag;
  if (target.empty()) {
    target = manifest.output;
    target.replace_extension(".rerun" + manifest.output.extension().string());
  }
  args.push_back("--out");
  args.push_back(target.string());

  std::ostringstream replay_out;
  const int code = run(args, replay_out, err);
  if (code != kOk) return code;
  const std::string digest = hex64(fnv1a64(read_file(target)));
  const bool same = digest == manifest.output_digest;
  out << (same ? "identical" : "DIFFERENT") << ": " << target.string() << " fnv1a64 " << digest << " vs recorded "
      << manifest.output_digest << '\n';
  return same ? kOk : kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polar code construction by minimum weight distribution, with SC/SCL evaluation."};
  app.name("polarmwd");
  app.require_subcommand(1);
  app.set_version_flag("--version", "polarmwd 1.0.0");

  std::string out_flag;
  auto add_out = [&out_flag](CLI::App* cmd) {
    cmd->add_option("--out", out_flag, "output file (default: $" + std::string(kOutDirEnv) + " or the cwd)");
  };

  SequenceOptions seq_opts;
  auto* sequence = app.add_subcommand("sequence", "write a full reliability sequence");
  sequence->add_option("--n", seq_opts.n, "log2 of the code length N")->required()->check(CLI::Range(1, 20));
  sequence->add_option("--method", seq_opts.method, "mwd, pw or ga")->check(CLI::IsMember({"mwd", "pw", "ga"}));
  sequence->add_option("--design-snr-db", seq_opts.design_snr_db, "design Eb/N0 in dB (ga)");
  sequence->add_option("--rate", seq_opts.rate, "code rate used by the GA design (ga)");
  add_out(sequence);

  SetOptions set_opts;
  auto* construct = app.add_subcommand("construct", "build an information set and report its properties");
  add_set_options(construct, set_opts, false);
  add_out(construct);

  bool oracle = false;
  auto* mwd = app.add_subcommand("mwd", "minimum weight distribution of an information set");
  add_set_options(mwd, set_opts, false);
  mwd->add_flag("--oracle", oracle, "also enumerate all codewords and compare");
  add_out(mwd);

  std::string grid_text;
  auto* aub_cmd = app.add_subcommand("aub", "approximate union bound over an Eb/N0 grid");
  add_set_options(aub_cmd, set_opts, false);
  aub_cmd->add_option("--ebn0-db", grid_text, "grid: a:step:b or comma list")->required();
  add_out(aub_cmd);

  RunOptions run_opts;
  std::string format = "csv";
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo BLER over an Eb/N0 grid");
  add_set_options(simulate, set_opts, true);
  simulate->add_option("--ebn0-db", grid_text, "grid: a:step:b or comma list")->required();
  simulate->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  add_run_options(simulate, run_opts, true);
  add_out(simulate);

  RequiredSnrOptions req_opts;
  auto* required = app.add_subcommand("required-snr", "smallest Eb/N0 reaching a target BLER (0.1 dB grid)");
  add_set_options(required, set_opts, true);
  required->add_option("--target-bler", req_opts.target_bler, "target block error rate")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  required->add_option("--lo-db", req_opts.lo_db, "lower end of the search range")->required();
  required->add_option("--hi-db", req_opts.hi_db, "upper end of the search range")->required();
  add_run_options(required, run_opts, false);
  add_out(required);

  std::string manifest_file;
  std::optional<unsigned> rerun_threads;
  auto* rerun = app.add_subcommand("rerun", "replay a manifest and compare the output digest");
  rerun->add_option("--manifest", manifest_file, "manifest written next to an earlier output")->required();
  rerun->add_option("--threads", rerun_threads, "override the recorded thread count");
  add_out(rerun);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (sequence->parsed()) {
      emit("sequence", args, out_flag, cmd_sequence(seq_opts), out, err);
    } else if (construct->parsed()) {
      emit("construct", args, out_flag, cmd_construct(set_opts), out, err);
    } else if (mwd->parsed()) {
      const MwdCommandResult result = cmd_mwd(set_opts, oracle);
      emit("mwd", args, out_flag, result.output, out, err);
      return result.exit_code;
    } else if (aub_cmd->parsed()) {
      emit("aub", args, out_flag, cmd_aub(set_opts, grid_text), out, err);
    } else if (simulate->parsed()) {
      emit("simulate", args, out_flag, cmd_simulate(set_opts, run_opts, grid_text, format), out, err);
    } else if (required->parsed()) {
      emit("required-snr", args, out_flag, cmd_required_snr(set_opts, run_opts, req_opts), out, err);
    } else if (rerun->parsed()) {
      return cmd_rerun(manifest_file, rerun_threads, out_flag, out, err);
    }
    return kOk;
  } catch (const NonDecreasingSet& e) {
    err << "error: NonDecreasingSet: " << e.what() << '\n';
    return kPrecondition;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace polarmwd::cli
