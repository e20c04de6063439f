#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "empeq/ccost.h"
#include "empeq/corpus.h"
#include "empeq/empirical.h"
#include "empeq/game_io.h"
#include "empeq/monotone.h"
#include "empeq/nash.h"
#include "empeq/qre.h"
#include "empeq/refine.h"
#include "empeq/report.h"

namespace empeq::cli {
namespace {

// Bad flags or files: exit 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string game;
  std::string corpus;
  double c1 = 2.0;
  double c2 = 2.0;
  std::optional<double> tol;
  std::string delta_schedule;
  double lambda_max = 1e3;
  double m = 1.0;
  int resolution = 200;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  bool timings = false;
  std::string profile;
  std::string splines;
  std::string kind = "weak";
  double epsilon = 0.1;
  std::optional<double> y0;
  std::optional<double> y_star;
  std::string corpus_name;
};

class Stopwatch {
 public:
  void stage(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    if (!current_.empty()) {
      seconds_[current_] = std::chrono::duration<double>(now - start_).count();
    }
    current_ = name;
    start_ = now;
  }
  Json finish() {
    stage("");
    return seconds_;
  }

 private:
  std::string current_;
  std::chrono::steady_clock::time_point start_;
  Json seconds_ = Json::object();
};

Game load(const Config& cfg) {
  if (!cfg.game.empty() && !cfg.corpus.empty()) {
    throw InputError("--game and --corpus are mutually exclusive");
  }
  if (cfg.game.empty() && cfg.corpus.empty()) throw InputError("a game is required (--game or --corpus)");
  if (!cfg.corpus.empty()) return corpus::by_name(cfg.corpus, cfg.c1, cfg.c2);
  if (!std::filesystem::exists(cfg.game)) {
    const auto names = corpus::names();
    if (std::find(names.begin(), names.end(), cfg.game) != names.end()) {
      return corpus::by_name(cfg.game, cfg.c1, cfg.c2);
    }
  }
  return load_game_file(cfg.game);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw FormatError(path, std::string("invalid JSON: ") + e.what());
  }
}

MixedProfile load_profile(const Game& game, const std::string& path) {
  if (path.empty()) throw InputError("--profile is required");
  std::ifstream in(path);
  if (!in) throw FormatError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_profile(game, buf.str());
}

std::vector<double> parse_schedule(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw InputError("--delta-schedule: not a number: \"" + item + "\"");
    }
    out.push_back(v);
  }
  if (out.empty()) throw InputError("--delta-schedule is empty");
  return out;
}

std::string resolve_format(const Config& cfg, const std::string& fallback,
                           std::initializer_list<const char*> allowed) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  for (const char* a : allowed) {
    if (f == a) return f;
  }
  throw InputError("--format " + f + " is not supported by this subcommand");
}

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw InputError("cannot write " + cfg.out);
  file << text;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

EmpiricalOptions empirical_options(const Config& cfg) {
  EmpiricalOptions o;
  if (!cfg.delta_schedule.empty()) o.delta_schedule = parse_schedule(cfg.delta_schedule);
  o.m = cfg.m;
  o.seed = cfg.seed;
  if (cfg.tol) o.nash_tol = *cfg.tol;
  return o;
}

int cmd_nash(const Config& cfg, std::ostream& out) {
  const std::string format = resolve_format(cfg, "json", {"json"});
  (void)format;
  const Game game = load(cfg);
  Stopwatch watch;
  watch.stage("enumerate");
  const EquilibriumSet set = enumerate_nash(game);
  watch.stage("refine");
  RefinementOptions ro;
  if (cfg.tol) ro.nash_tol = *cfg.tol;
  const auto tags = classify(game, set, ro);
  Json report = nash_report(game, set, tags);
  if (cfg.timings) report["timings"] = watch.finish();
  emit(cfg, dump(report), out);
  for (const auto& t : tags) {
    if (t.perfect.verdict == Verdict::kInconclusive ||
        t.proper.verdict == Verdict::kInconclusive) {
      return kExitInconclusive;
    }
  }
  return kExitOk;
}

int cmd_wpm(const Config& cfg, std::ostream& out) {
  resolve_format(cfg, "json", {"json"});
  const Game game = load(cfg);
  const MixedProfile profile = load_profile(game, cfg.profile);
  if (!(cfg.m >= 0.0 && cfg.m <= 1.0)) throw InputError("--m must lie in [0, 1]");
  emit(cfg, dump(monotonicity_report(game, profile, cfg.tol.value_or(kMonotoneTolerance), cfg.m)),
       out);
  return kExitOk;
}

int cmd_region(const Config& cfg, std::ostream& out) {
  const std::string format = resolve_format(cfg, "csv", {"csv", "json"});
  const Game game = load(cfg);
  MonotoneKind kind;
  if (cfg.kind == "weak") {
    kind = MonotoneKind::kWeak;
  } else if (cfg.kind == "strict") {
    kind = MonotoneKind::kStrict;
  } else {
    throw InputError("--kind must be weak or strict");
  }
  const auto points =
      sample_monotone_region(game, cfg.resolution, kind, cfg.tol.value_or(kMonotoneTolerance));
  if (format == "csv") {
    emit(cfg, region_csv(points), out);
  } else {
    Json doc = {{"kind", cfg.kind},
                {"resolution", cfg.resolution},
                {"points", points.size()},
                {"satisfied_fraction", satisfied_fraction(points)}};
    emit(cfg, dump(doc), out);
  }
  return kExitOk;
}

int cmd_trace(const Config& cfg, std::ostream& out) {
  const std::string format = resolve_format(cfg, "csv", {"csv", "json"});
  const Game game = load(cfg);
  if (!(cfg.lambda_max > 0.01)) throw InputError("--lambda-max must exceed 0.01");
  FixedPointOptions fo;
  if (cfg.tol) fo.tolerance = *cfg.tol;
  const LogitPath path = trace_logit_path(game, default_lambda_schedule(cfg.lambda_max), fo);
  if (format == "csv") {
    emit(cfg, trace_csv(game, path), out);
  } else {
    Json doc;
    Json points = Json::array();
    for (const auto& p : path.points) {
      points.push_back({{"lambda", p.lambda},
                        {"profile", profile_to_json(game, p.profile)},
                        {"residual", p.residual}});
    }
    doc["points"] = std::move(points);
    if (path.nearest) {
      doc["nearest_equilibrium"] = {{"profile", profile_to_json(game, path.nearest->profile)},
                                    {"distance", path.nearest->distance}};
    } else {
      doc["nearest_equilibrium"] = nullptr;
    }
    if (!path.diagnostics.empty()) doc["diagnostics"] = path.diagnostics;
    emit(cfg, dump(doc), out);
  }
  return kExitOk;
}

int cmd_empirical(const Config& cfg, std::ostream& out) {
  resolve_format(cfg, "json", {"json"});
  const Game game = load(cfg);
  const EmpiricalOptions options = empirical_options(cfg);
  Stopwatch watch;
  Json report;
  bool inconclusive = false;
  if (!cfg.profile.empty()) {
    const MixedProfile candidate = load_profile(game, cfg.profile);
    watch.stage("membership");
    const auto verdict = empirical_membership(game, candidate, options);
    report = membership_json(game, verdict);
    report["m"] = options.m;
    inconclusive = verdict.decision == Decision::kInconclusive;
  } else {
    watch.stage("enumerate");
    const EquilibriumSet set = enumerate_nash(game);
    watch.stage("membership");
    const EmpiricalSet es = enumerate_empirical(game, set, options);
    report = empirical_report(game, es, options.m);
    for (const auto& v : es.isolated) inconclusive |= v.decision == Decision::kInconclusive;
    for (const auto& c : es.components) {
      for (auto d : c.decisions) inconclusive |= d == Decision::kInconclusive;
      for (const auto& v : c.probes) inconclusive |= v.decision == Decision::kInconclusive;
    }
  }
  if (cfg.timings) report["timings"] = watch.finish();
  emit(cfg, dump(report), out);
  return inconclusive ? kExitInconclusive : kExitOk;
}

std::vector<ControlCostSpline> splines_from_doc(const Game& game, const Json& doc) {
  const auto it = doc.find("splines");
  if (it == doc.end() || !it->is_object()) throw FormatError("splines", "expected an object");
  std::vector<ControlCostSpline> out;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const auto s = it->find(game.player_name(i));
    if (s == it->end()) throw FormatError("splines", "missing player " + game.player_name(i));
    out.push_back(ControlCostSpline::from_json(*s));
  }
  return out;
}

int cmd_ccost_build(const Config& cfg, std::ostream& out) {
  resolve_format(cfg, "json", {"json"});
  const Game game = load(cfg);
  const MixedProfile profile = load_profile(game, cfg.profile);
  if (!profile.is_interior()) throw InputError("the calibrating profile must be interior");
  double smallest = 1.0;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    for (double p : profile.strategy(i)) smallest = std::min(smallest, p);
  }
  const double y0 = cfg.y0.value_or(smallest / 2.0);
  Json doc;
  doc["epsilon"] = cfg.epsilon;
  doc["y0"] = y0;
  Json splines = Json::object();
  std::vector<ControlCostSpline> built;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const auto u = expected_utility(game, profile, i);
    built.push_back(build_spline(profile.strategy(i), u, cfg.epsilon, y0, cfg.y_star));
    splines[game.player_name(i)] = built.back().to_json();
  }
  doc["splines"] = std::move(splines);
  doc["check"] = cc_check_json(cc_equilibrium_check(ControlCostGame(game, built), profile,
                                                    cfg.tol.value_or(1e-9)));
  emit(cfg, dump(doc), out);
  return kExitOk;
}

int cmd_ccost_check(const Config& cfg, std::ostream& out) {
  resolve_format(cfg, "json", {"json"});
  const Game game = load(cfg);
  if (cfg.splines.empty()) throw InputError("--splines is required");
  const auto splines = splines_from_doc(game, read_json_file(cfg.splines));
  const MixedProfile profile = load_profile(game, cfg.profile);
  const ControlCostGame ccg(game, splines);
  Json doc = cc_check_json(cc_equilibrium_check(ccg, profile, cfg.tol.value_or(1e-9)));
  Json payoffs = Json::object();
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    payoffs[game.player_name(i)] = ccg.payoff(profile, i);
  }
  doc["payoffs"] = std::move(payoffs);
  emit(cfg, dump(doc), out);
  return kExitOk;
}

int cmd_ccost_roundtrip(const Config& cfg, std::ostream& out) {
  resolve_format(cfg, "json", {"json"});
  if (cfg.splines.empty()) throw InputError("--splines is required");
  Json doc = read_json_file(cfg.splines);
  const auto it = doc.find("splines");
  if (it == doc.end() || !it->is_object()) throw FormatError("splines", "expected an object");
  for (auto s = it->begin(); s != it->end(); ++s) {
    s.value() = ControlCostSpline::from_json(s.value()).to_json();
  }
  emit(cfg, dump(doc), out);
  return kExitOk;
}

int cmd_corpus_list(const Config& cfg, std::ostream& out) {
  std::string text;
  for (const auto& n : corpus::names()) text += n + "\n";
  emit(cfg, text, out);
  return kExitOk;
}

int cmd_corpus_emit(const Config& cfg, std::ostream& out) {
  emit(cfg, dump_game(corpus::by_name(cfg.corpus_name, cfg.c1, cfg.c2)), out);
  return kExitOk;
}

void add_game_flags(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--game", cfg.game, "Game file, or a bundled game name");
  cmd->add_option("--corpus", cfg.corpus, "Bundled game name");
  cmd->add_option("--c1", cfg.c1, "First penalty of gamma2c")->capture_default_str();
  cmd->add_option("--c2", cfg.c2, "Second penalty of gamma2c")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--out", cfg.out, "Write the artifact to this file");
  cmd->add_option("--format", cfg.format, "json or csv");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Equilibrium analysis of finite normal-form games", "empeq"};
  app.require_subcommand(1);
  app.fallthrough(false);

  auto* nash = app.add_subcommand("nash", "Enumerate Nash equilibria and refinements");
  add_game_flags(nash, cfg);
  add_output_flags(nash, cfg);
  nash->add_option("--tol", cfg.tol, "Nash tolerance");
  nash->add_flag("--timings", cfg.timings, "Report wall time per stage");

  auto* wpm = app.add_subcommand("wpm", "Payoff monotonicity verdicts for a profile");
  add_game_flags(wpm, cfg);
  add_output_flags(wpm, cfg);
  wpm->add_option("--profile", cfg.profile, "Profile file")->required();
  wpm->add_option("--tol", cfg.tol, "Comparison tolerance");
  wpm->add_option("--m", cfg.m, "m for the m-weak test")->capture_default_str();

  auto* region = app.add_subcommand("region", "Sample the monotone region of a 2x..x2 game");
  add_game_flags(region, cfg);
  add_output_flags(region, cfg);
  region->add_option("--resolution", cfg.resolution, "Grid steps per axis")->capture_default_str();
  region->add_option("--kind", cfg.kind, "weak or strict")->capture_default_str();
  region->add_option("--tol", cfg.tol, "Comparison tolerance");

  auto* trace = app.add_subcommand("trace", "Trace the logit equilibrium path");
  add_game_flags(trace, cfg);
  add_output_flags(trace, cfg);
  trace->add_option("--lambda-max", cfg.lambda_max, "Largest lambda")->capture_default_str();
  trace->add_option("--tol", cfg.tol, "Fixed-point tolerance");

  auto* empirical = app.add_subcommand("empirical", "Empirical equilibrium membership");
  add_game_flags(empirical, cfg);
  add_output_flags(empirical, cfg);
  empirical->add_option("--profile", cfg.profile, "Decide a single candidate");
  empirical->add_option("--delta-schedule", cfg.delta_schedule, "Decreasing radii, comma separated");
  empirical->add_option("--m", cfg.m, "m in [0, 1]")->capture_default_str();
  empirical->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  empirical->add_option("--tol", cfg.tol, "Nash tolerance of candidates");
  empirical->add_flag("--timings", cfg.timings, "Report wall time per stage");

  auto* ccost = app.add_subcommand("ccost", "Control-cost splines");
  ccost->require_subcommand(1);
  auto* build = ccost->add_subcommand("build", "Calibrate splines at an interior profile");
  add_game_flags(build, cfg);
  add_output_flags(build, cfg);
  build->add_option("--profile", cfg.profile, "Calibrating profile")->required();
  build->add_option("--epsilon", cfg.epsilon, "Slope margin")->capture_default_str();
  build->add_option("--y0", cfg.y0, "Start of the quadratic pieces");
  build->add_option("--y-star", cfg.y_star, "Calibration point");
  build->add_option("--tol", cfg.tol, "First-order condition tolerance");
  auto* check = ccost->add_subcommand("check", "Check a profile against splines");
  add_game_flags(check, cfg);
  add_output_flags(check, cfg);
  check->add_option("--splines", cfg.splines, "Spline file")->required();
  check->add_option("--profile", cfg.profile, "Interior profile")->required();
  check->add_option("--tol", cfg.tol, "First-order condition tolerance");
  auto* roundtrip = ccost->add_subcommand("roundtrip", "Parse and re-emit a spline file");
  add_output_flags(roundtrip, cfg);
  roundtrip->add_option("--splines", cfg.splines, "Spline file")->required();

  auto* corpus_cmd = app.add_subcommand("corpus", "Bundled games");
  corpus_cmd->require_subcommand(1);
  auto* list = corpus_cmd->add_subcommand("list", "List bundled games");
  add_output_flags(list, cfg);
  auto* emit_cmd = corpus_cmd->add_subcommand("emit", "Write a bundled game file");
  emit_cmd->add_option("name", cfg.corpus_name, "Game name")->required();
  emit_cmd->add_option("--c1", cfg.c1, "First penalty of gamma2c")->capture_default_str();
  emit_cmd->add_option("--c2", cfg.c2, "Second penalty of gamma2c")->capture_default_str();
  add_output_flags(emit_cmd, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (nash->parsed()) return cmd_nash(cfg, out);
    if (wpm->parsed()) return cmd_wpm(cfg, out);
    if (region->parsed()) return cmd_region(cfg, out);
    if (trace->parsed()) return cmd_trace(cfg, out);
    if (empirical->parsed()) return cmd_empirical(cfg, out);
    if (build->parsed()) return cmd_ccost_build(cfg, out);
    if (check->parsed()) return cmd_ccost_check(cfg, out);
    if (roundtrip->parsed()) return cmd_ccost_roundtrip(cfg, out);
    if (list->parsed()) return cmd_corpus_list(cfg, out);
    if (emit_cmd->parsed()) return cmd_corpus_emit(cfg, out);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInconclusive;
  }
  err << "error: no subcommand\n";
  return kExitInputError;
}

}  // namespace empeq::cli
