#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpsfuzz/causal.hpp"
#include "cpsfuzz/equivalence.hpp"
#include "cpsfuzz/errors.hpp"
#include "cpsfuzz/fuzz.hpp"
#include "cpsfuzz/plant.hpp"
#include "cpsfuzz/plant_io.hpp"
#include "cpsfuzz/strategy_io.hpp"
#include "cpsfuzz/suite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cpsfuzz;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

struct UsageError : Error {
  using Error::Error;
};

PlantModel plant_or_default(const std::string& path) { return path.empty() ? miniswat() : load_plant(path); }

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string fixed(double v, int prec = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// validate

enum class FileKind { Plant, Strategy, Campaign, Suite, Unknown };

FileKind sniff(const fs::path& path, json* doc) {
  if (path.extension() == ".strategy") return FileKind::Strategy;
  if (path.extension() != ".json") return FileKind::Unknown;
  *doc = json::parse(read_text_file(path));
  if (doc->contains("tanks")) return FileKind::Plant;
  if (doc->contains("tests")) return FileKind::Suite;
  if (doc->contains("plant")) return FileKind::Campaign;
  return FileKind::Unknown;
}

int cmd_validate(const std::vector<std::string>& paths, const std::string& plant_path) {
  std::optional<Plant> plant;
  std::vector<std::string> problems;
  auto report = [&](const std::string& where, const std::string& msg) { problems.push_back(where + ": " + msg); };
  if (!plant_path.empty()) {
    try {
      plant.emplace(load_plant(plant_path));
    } catch (const Error& e) {
      report(plant_path, e.what());
    }
  }
  for (const auto& p : paths) {
    try {
      json doc;
      switch (sniff(p, &doc)) {
        case FileKind::Plant:
          Plant(plant_from_json(doc));
          break;
        case FileKind::Strategy: {
          auto s = load_strategy(p);
          for (const auto& v : validate_strategy(s, plant ? &*plant : nullptr)) report(p, v);
          break;
        }
        case FileKind::Campaign: {
          auto c = campaign_file_from_json(doc, fs::path(p).parent_path());
          Plant cp(load_plant(c.plant));
          for (const auto& g : c.goals) make_goal(cp, g);
          for (const auto& [g, dt] : c.dt_overrides) {
            make_goal(cp, g);
            if (dt <= 0) report(p, "dt for " + g + " must be positive");
          }
          if (c.strategy) {
            auto s = load_strategy(*c.strategy);
            for (const auto& v : validate_strategy(s, &cp)) report(c.strategy->string(), v);
          }
          break;
        }
        case FileKind::Suite:
          suite_from_json(doc);
          break;
        case FileKind::Unknown:
          report(p, "unrecognised file (expected a plant, campaign or suite .json, or a .strategy)");
          break;
      }
    } catch (const json::parse_error& e) {
      report(p, e.what());
    } catch (const Error& e) {
      report(p, e.what());
    }
  }
  for (const auto& msg : problems) std::cerr << msg << "\n";
  if (problems.empty()) std::cout << "ok: " << paths.size() << " file(s) valid\n";
  return problems.empty() ? kOk : kValidation;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string plant;
  double horizon = 0.0;
  std::string inject;
  double inject_from = 0.0;
  double inject_until = std::numeric_limits<double>::infinity();
  std::string out;
  std::uint64_t seed = 0;
  bool random_start = false;
};

int cmd_simulate(const SimulateArgs& a) {
  if (a.horizon <= 0) throw UsageError("--horizon must be positive");
  Plant plant(plant_or_default(a.plant));
  CapabilitySet caps = a.inject.empty() ? CapabilitySet{} : parse_capability_set(a.inject);
  plant.resolve(caps);
  PhysicalState x0 = plant.initial_state();
  if (a.random_start) {
    std::mt19937_64 rng(a.seed);
    x0 = plant.random_nominal_state(rng);
  }
  const double tick = plant.tick();
  Injector inject = [&](std::size_t step, const PhysicalState&) {
    double t = static_cast<double>(step) * tick;
    return (t >= a.inject_from && t < a.inject_until) ? caps : CapabilitySet{};
  };
  PhysicsAudit audit;
  std::vector<TrajectoryRecord> log;
  auto states = run_plant(plant, plant.initial_control(), x0, a.horizon, inject, &audit, a.out.empty() ? nullptr : &log);

  const auto& sensors = plant.model().sensors;
  std::vector<double> lo(sensors.size(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(sensors.size(), -std::numeric_limits<double>::infinity());
  std::vector<std::optional<double>> first(sensors.size());
  std::vector<double> r;
  for (const auto& [q, x] : states) {
    plant.observe_into(x, r);
    for (std::size_t i = 0; i < sensors.size(); ++i) {
      lo[i] = std::min(lo[i], r[i]);
      hi[i] = std::max(hi[i], r[i]);
      if (!first[i] && (r[i] < sensors[i].domain.safe_lo || r[i] > sensors[i].domain.safe_hi)) first[i] = x.clock;
    }
  }
  std::size_t violations = 0;
  std::cout << "sensor     min        max        safe\n";
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const auto& d = sensors[i].domain;
    std::cout << sensors[i].id << std::string(11 - std::min<std::size_t>(10, sensors[i].id.size()), ' ')
              << fixed(lo[i], 3) << "  " << fixed(hi[i], 3) << "  [" << d.safe_lo << ", " << d.safe_hi << "]";
    if (first[i]) {
      ++violations;
      std::cout << "  VIOLATION first at t=" << fixed(*first[i], 0) << " s";
    }
    std::cout << "\n";
  }
  std::cout << "safe-range violations: " << violations << "\n";
  std::cout << "max conservation residual: " << audit.max_residual << " m^3 over " << audit.substeps
            << " sub-steps, " << audit.clamps.size() << " clamp event(s)\n";
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    std::ofstream f(fs::path(a.out) / "trajectory.jsonl");
    write_trajectory(f, log);
    std::cout << "trajectory: " << (fs::path(a.out) / "trajectory.jsonl").string() << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// fuzz

struct FuzzArgs {
  std::string config;
  std::string plant;
  std::string strategy;
  std::vector<std::string> goals;
  std::optional<std::string> kind;
  std::optional<std::uint64_t> seed;
  std::optional<double> budget;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> walks;
  std::optional<std::size_t> walk_len;
  std::optional<double> dt;
  std::optional<std::size_t> threads;
  bool prune_strong = false;
  std::string out = "suite";
};

int cmd_fuzz(const FuzzArgs& a) {
  CampaignFile cf;
  if (!a.config.empty()) cf = load_campaign_file(a.config);
  if (!a.plant.empty()) cf.plant = a.plant;
  if (!a.strategy.empty()) cf.strategy = a.strategy;
  if (!a.goals.empty()) cf.goals = (a.goals.size() == 1 && a.goals[0] == "all") ? std::vector<std::string>{} : a.goals;
  if (a.kind) {
    auto k = parse_class_kind(*a.kind);
    if (!k) throw UsageError("unknown class '" + *a.kind + "'");
    cf.config.kind = *k;
  }
  if (a.seed) cf.config.seed = *a.seed;
  if (a.budget) cf.config.budget_secs = *a.budget;
  if (a.iterations) cf.config.max_iterations = *a.iterations;
  if (a.walks) cf.config.walks = *a.walks;
  if (a.walk_len) cf.config.walk_len = *a.walk_len;
  if (a.threads) cf.config.threads = *a.threads;
  if (a.prune_strong) cf.config.prune_strong = true;
  if (cf.config.walks == 0 || cf.config.walk_len == 0) throw UsageError("--walks and --walk-len must be positive");

  Plant plant(cf.plant.empty() ? miniswat() : load_plant(cf.plant));
  Strategy base = cf.strategy ? load_strategy(*cf.strategy) : universal_strategy(actuator_universe(plant));
  std::vector<Goal> goals;
  if (cf.goals.empty()) {
    goals = all_goals(plant);
  } else {
    for (const auto& g : cf.goals) goals.push_back(make_goal(plant, g));
  }
  for (auto& g : goals) {
    for (const auto& [name, dt] : cf.dt_overrides) {
      if (name == g.name) g.dt = dt;
    }
    if (a.dt) g.dt = *a.dt;
    if (g.dt <= 0) throw UsageError("dt must be positive");
  }
  json digest_doc = to_json(cf.config);
  digest_doc["plant"] = plant.model().name;
  digest_doc["strategy"] = print_strategy(base);
  json goal_doc = json::array();
  for (const auto& g : goals) goal_doc.push_back({{"goal", g.name}, {"dt", g.dt}});
  digest_doc["goals"] = goal_doc;
  const std::string digest = config_digest(digest_doc);

  std::vector<CampaignResult> results(goals.size());
  std::vector<std::string> failures(goals.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < goals.size(); i = next++) {
      CampaignConfig c = cf.config;
      c.seed = goals.size() > 1 ? goal_seed(cf.config.seed, goals[i].name) : cf.config.seed;
      try {
        Campaign campaign(plant, base, goals[i], c);
        results[i] = campaign.run();
      } catch (const Error& e) {
        failures[i] = e.what();
        results[i].goal = goals[i];
        results[i].config = c;
      }
    }
  };
  std::size_t parallel = std::max(1u, std::thread::hardware_concurrency());
  parallel = std::min(parallel, goals.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < parallel; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  fs::create_directories(a.out);
  std::cout << "goal            class          count  iterations  wall_s\n";
  int status = kOk;
  for (std::size_t i = 0; i < goals.size(); ++i) {
    const auto& r = results[i];
    std::string name = r.goal.name;
    std::cout << name << std::string(16 - std::min<std::size_t>(15, name.size()), ' ') << to_string(r.config.kind)
              << std::string(15 - to_string(r.config.kind).size(), ' ') << r.tests.size() << "      "
              << r.stats.iterations << "          " << fixed(r.stats.wall_secs) << "\n";
    if (!failures[i].empty()) {
      std::cerr << name << ": " << failures[i] << "\n";
      status = kRuntime;
      continue;
    }
    if (r.stats.errors) std::cerr << name << ": " << r.stats.errors << " iteration(s) failed (see suite log)\n";
    if (!r.pairwise_distinct) {
      std::cerr << name << ": pairwise non-equivalence self-check FAILED\n";
      status = kRuntime;
    }
    write_text_file(fs::path(a.out) / (name + "." + std::string(to_string(r.config.kind)) + ".suite.json"),
                    suite_to_json(plant, r).dump(2) + "\n");
  }
  json report = report_to_json(results, cf.config.seed, digest);
  write_text_file(fs::path(a.out) / "report.json", report.dump(2) + "\n");
  std::cout << "total " << report["total"].get<std::size_t>() << " test(s); digest " << digest << "; written to "
            << a.out << "\n";
  return status;
}

// ---------------------------------------------------------------------------
// strategy

void emit(const Strategy& s, const std::string& out) {
  if (out.empty()) {
    std::cout << print_strategy(s);
  } else {
    save_strategy(s, out);
  }
}

std::vector<CapabilitySet> parse_universe(const std::string& text) {
  std::vector<CapabilitySet> out;
  for (const auto& y : parse_history(text)) out.push_back(y);
  return out;
}

int cmd_excl(const std::string& kind_text, const std::string& anchor, const std::string& set, const std::string& out) {
  auto kind = parse_class_kind(kind_text);
  if (!kind) throw UsageError("unknown class '" + kind_text + "'");
  bool by_set = *kind == ClassKind::CapabilitySet && !set.empty();
  if (anchor.empty() && !by_set) throw UsageError("--anchor is required for " + kind_text);
  EquivalenceClassSpec spec{*kind, {}, parse_history(anchor)};
  if (*kind == ClassKind::CapabilitySet) spec.y = set.empty() ? cset(spec.anchor) : parse_capability_set(set);
  if (*kind == ClassKind::StrongOrder) spec.anchor = cord(spec.anchor);
  emit(excl(spec), out);
  return kOk;
}

int cmd_compose(const std::vector<std::string>& files, bool simplify_result, const std::string& out) {
  if (files.size() < 2) throw UsageError("compose needs at least two strategies");
  Strategy s = load_strategy(files[0]);
  for (std::size_t i = 1; i < files.size(); ++i) {
    s = compose(s, load_strategy(files[i]));
    if (simplify_result) s = simplify(s);
  }
  emit(s, out);
  return kOk;
}

int cmd_enumerate(const std::string& file, const std::string& universe, std::size_t max_len) {
  Strategy s = load_strategy(file);
  auto u = parse_universe(universe);
  if (u.empty()) throw UsageError("--universe must list at least one capability set");
  auto lang = enumerate_language(s, u, max_len);
  for (const auto& h : lang) std::cout << (h.empty() ? "ε" : to_string(h)) << "\n";
  std::cerr << lang.size() << " histories\n";
  return kOk;
}

int cmd_contains(const std::string& file, const std::string& history, const std::string& suite, std::size_t index,
                 std::optional<std::size_t> truncate) {
  Strategy s = load_strategy(file);
  CapabilityHistory h;
  if (!suite.empty()) {
    auto tests = suite_from_json(json::parse(read_text_file(suite)));
    if (index >= tests.size()) throw UsageError("--index out of range (suite has " + std::to_string(tests.size()) + ")");
    h = tests[index].entry.history;
  } else {
    h = parse_history(history);
  }
  if (truncate && h.size() > *truncate) h.resize(*truncate);
  bool yes = language_contains(s, h);
  std::cout << (yes ? "yes" : "no") << "\n";
  return yes ? kOk : 3;
}

// ---------------------------------------------------------------------------
// prune

int cmd_prune(const std::string& suite, std::size_t index, const std::string& plant_path, const std::string& out) {
  json doc;
  try {
    doc = json::parse(read_text_file(suite));
  } catch (const json::parse_error& e) {
    throw UsageError(suite + ": " + e.what());
  }
  std::vector<RecordedTest> tests;
  try {
    tests = suite_from_json(doc);
  } catch (const ModelValidationError& e) {
    throw UsageError(e.what());
  }
  if (index >= tests.size()) throw UsageError("--index out of range (suite has " + std::to_string(tests.size()) + ")");
  Plant plant(plant_or_default(plant_path));
  const auto& t = tests[index];
  ReplaySpec spec{t.entry.history, t.entry.q0, t.entry.x0, t.goal, t.dt};
  PruneResult r;
  try {
    r = prune(plant, spec);
  } catch (const NotReproducibleError& e) {
    std::cerr << e.what() << "\n";
    TestTrace failed = replay(plant, spec, spec.history);
    std::cerr << "replayed trajectory (t, readings):\n";
    for (const auto& step : failed.steps) {
      std::vector<std::string> cells;
      for (const auto& [k, v] : plant.observe(step.x).entries()) cells.push_back(k + "=" + fixed(v, 2));
      std::cerr << "  " << fixed(step.x.clock, 0) << "  " << join(cells, " ") << "\n";
    }
    return kRuntime;
  }
  CapabilitySet before = cset(t.entry.history);
  CapabilitySet after = cset(r.minimized.history);
  std::vector<std::string> removed, kept;
  for (const auto& c : before) (after.contains(c) ? kept : removed).push_back(to_string(c));
  std::cout << "history:   " << to_string(t.entry.history) << "\n";
  std::cout << "minimised: " << to_string(r.minimized.history) << "\n";
  std::cout << "causal:    " << to_string(after) << "\n";
  if (removed.empty()) {
    std::cout << "all causal\n";
  } else {
    std::cout << "removed:   " << join(removed, " ") << "\n";
  }
  std::cout << "probes:    " << r.probes << "\n";
  if (!out.empty()) {
    json e = doc["tests"][index];
    e["history"] = to_string(r.minimized.history);
    e["causal_set"] = to_string(after);
    e["ledger"] = ledger_to_json(r.ledger);
    e["probes"] = r.probes;
    write_text_file(out, e.dump(2) + "\n");
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// report

int cmd_report(const std::vector<std::string>& suites, const std::string& out) {
  json goals = json::array();
  std::size_t total = 0;
  std::cout << "goal            class          count  causal sets\n";
  for (const auto& path : suites) {
    json doc = json::parse(read_text_file(path));
    auto tests = suite_from_json(doc);
    std::string kind = doc.at("config").at("class").get<std::string>();
    std::string name = doc.value("goal", std::string{"?"});
    std::map<std::string, std::size_t> sets;
    for (const auto& t : tests) ++sets[to_string(t.entry.causal_set)];
    std::vector<std::string> listing;
    for (const auto& [s, n] : sets) listing.push_back(s + (n > 1 ? " x" + std::to_string(n) : ""));
    std::cout << name << std::string(16 - std::min<std::size_t>(15, name.size()), ' ') << kind
              << std::string(15 - std::min<std::size_t>(14, kind.size()), ' ') << tests.size() << "      "
              << (listing.size() > 4 ? std::to_string(listing.size()) + " distinct" : join(listing, " ")) << "\n";
    goals.push_back({{"goal", name}, {"class", kind}, {"count", tests.size()}, {"suite", path}});
    total += tests.size();
  }
  if (!out.empty()) write_text_file(out, json{{"goals", goals}, {"total", total}}.dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cpsfuzz: guided fuzzing for causally different ICS tests"};
  app.require_subcommand(1);

  std::vector<std::string> validate_paths;
  std::string validate_plant;
  auto* validate = app.add_subcommand("validate", "Check plant, strategy, campaign and suite files");
  validate->add_option("paths", validate_paths, "Files to check")->required();
  validate->add_option("--plant", validate_plant, "Plant to check strategies against (default: structural checks only)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run the plant and summarise sensor ranges");
  simulate->add_option("--plant", sim.plant, "Plant JSON (default: built-in MiniSWaT)");
  simulate->add_option("--horizon", sim.horizon, "Simulated seconds")->required();
  simulate->add_option("--inject", sim.inject, "Capability set held during the injection window, e.g. {[MV101,open]}");
  simulate->add_option("--inject-from", sim.inject_from, "Injection start (s)");
  simulate->add_option("--inject-until", sim.inject_until, "Injection end (s)");
  simulate->add_option("--seed", sim.seed, "Seed for --random-start");
  simulate->add_flag("--random-start", sim.random_start, "Start from a random nominal state");
  simulate->add_option("--out", sim.out, "Directory for trajectory.jsonl");

  FuzzArgs fz;
  std::string class_text;
  auto* fuzz = app.add_subcommand("fuzz", "Run guided fuzzing campaigns");
  fuzz->add_option("config", fz.config, "Campaign config JSON");
  fuzz->add_option("--plant", fz.plant, "Plant JSON (default: built-in MiniSWaT)");
  fuzz->add_option("--strategy", fz.strategy, "Initial strategy (default: universal)");
  fuzz->add_option("--goals", fz.goals, "Goal names such as LIT101-High, or 'all'")->delimiter(',');
  auto* class_opt = fuzz->add_option("--class", class_text, "causal-set | strong-set | strong-order");
  auto* seed_opt = fuzz->add_option("--seed", fz.seed.emplace(), "Campaign seed");
  auto* budget_opt = fuzz->add_option("--budget-secs", fz.budget.emplace(), "Wall-clock budget per goal");
  auto* iter_opt = fuzz->add_option("--max-iterations", fz.iterations.emplace(), "Iteration budget per goal");
  auto* walks_opt = fuzz->add_option("--walks", fz.walks.emplace(), "Candidate walks per planning round");
  auto* len_opt = fuzz->add_option("--walk-len", fz.walk_len.emplace(), "Transitions per walk");
  auto* dt_opt = fuzz->add_option("--dt", fz.dt.emplace(), "Seconds per strategy step (overrides goal default)");
  auto* threads_opt = fuzz->add_option("--threads", fz.threads.emplace(), "Threads for walk scoring");
  fuzz->add_flag("--prune-strong", fz.prune_strong, "Also minimise tests of strong-set/strong-order campaigns");
  fuzz->add_option("--out", fz.out, "Output directory");

  auto* strategy = app.add_subcommand("strategy", "Build and query strategies");
  strategy->require_subcommand(1);
  std::string ex_class = "causal-set", ex_anchor, ex_set, ex_out;
  auto* ex = strategy->add_subcommand("excl", "Write Excl([t]) for a class and anchor history");
  ex->add_option("--class", ex_class, "causal-set | strong-set | strong-order");
  ex->add_option("--anchor", ex_anchor, "Anchor history, e.g. \"{} {[P101,off]}\"");
  ex->add_option("--set", ex_set, "Y for causal-set (default: cset of the anchor)");
  ex->add_option("-o,--out", ex_out, "Output strategy file");
  std::vector<std::string> co_files;
  std::string co_out;
  bool co_simplify = true;
  auto* co = strategy->add_subcommand("compose", "Write the parallel composition of strategies");
  co->add_option("files", co_files, "Strategy files")->required();
  co->add_option("-o,--out", co_out, "Output strategy file");
  co->add_flag("!--no-simplify", co_simplify, "Keep unreachable states and unsatisfiable edges");
  std::string en_file, en_universe;
  std::size_t en_len = 3;
  auto* en = strategy->add_subcommand("enumerate", "List the language up to a length");
  en->add_option("file", en_file, "Strategy file")->required();
  en->add_option("--universe", en_universe, "Capability sets, e.g. \"{} {[p1,on]}\"")->required();
  en->add_option("--max-len", en_len, "Longest history");
  std::string ct_file, ct_history, ct_suite;
  std::size_t ct_index = 0, ct_trunc = 0;
  auto* ct = strategy->add_subcommand("contains", "Membership of a history (exit 0 yes, 3 no)");
  ct->add_option("file", ct_file, "Strategy file")->required();
  ct->add_option("--history", ct_history, "History; empty for ε");
  ct->add_option("--suite", ct_suite, "Take the history from a suite file");
  ct->add_option("--index", ct_index, "Suite entry");
  auto* trunc_opt = ct->add_option("--truncate", ct_trunc, "Check only the first N sets");

  std::string pr_suite, pr_plant, pr_out;
  std::size_t pr_index = 0;
  auto* pr = app.add_subcommand("prune", "Causally minimise a recorded test");
  pr->add_option("suite", pr_suite, "Suite file")->required();
  pr->add_option("--index", pr_index, "Suite entry");
  pr->add_option("--plant", pr_plant, "Plant JSON (default: built-in MiniSWaT)");
  pr->add_option("--out", pr_out, "Write the minimised entry here");

  std::vector<std::string> rp_suites;
  std::string rp_out;
  auto* rp = app.add_subcommand("report", "Summarise suite files");
  rp->add_option("suites", rp_suites, "Suite files")->required();
  rp->add_option("--out", rp_out, "Write a JSON summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*validate) return cmd_validate(validate_paths, validate_plant);
    if (*simulate) return cmd_simulate(sim);
    if (*fuzz) {
      if (*class_opt) fz.kind = class_text;
      if (!*seed_opt) fz.seed.reset();
      if (!*budget_opt) fz.budget.reset();
      if (!*iter_opt) fz.iterations.reset();
      if (!*walks_opt) fz.walks.reset();
      if (!*len_opt) fz.walk_len.reset();
      if (!*dt_opt) fz.dt.reset();
      if (!*threads_opt) fz.threads.reset();
      return cmd_fuzz(fz);
    }
    if (*ex) return cmd_excl(ex_class, ex_anchor, ex_set, ex_out);
    if (*co) return cmd_compose(co_files, co_simplify, co_out);
    if (*en) return cmd_enumerate(en_file, en_universe, en_len);
    if (*ct)
      return cmd_contains(ct_file, ct_history, ct_suite, ct_index,
                          *trunc_opt ? std::optional<std::size_t>(ct_trunc) : std::nullopt);
    if (*pr) return cmd_prune(pr_suite, pr_index, pr_plant, pr_out);
    if (*rp) return cmd_report(rp_suites, rp_out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kValidation;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const ModelValidationError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const UnknownSensorError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const CapabilityDomainError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const EmptySetError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const NotDeduplicatedError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const IndexError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const json::exception& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const SizeCapExceeded& e) {
    std::cerr << e.what() << "\n(the strategy is too large; use a smaller anchor or fewer compositions)\n";
    return kRuntime;
  } catch (const BudgetExceeded& e) {
    std::cerr << e.what() << "\n(lower --max-len or shrink --universe)\n";
    return kRuntime;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
