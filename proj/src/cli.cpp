#include "freeshift/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "freeshift/checks.hpp"
#include "freeshift/config.hpp"
#include "freeshift/contraction.hpp"
#include "freeshift/errors.hpp"
#include "freeshift/io.hpp"
#include "freeshift/rewiring.hpp"

namespace freeshift {

namespace {

using io::Json;

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t alphabet_size = 2;
  std::string law = "uniform";
  std::size_t radius = 3;
  std::size_t fradius = 2;
  std::int64_t budget = kDefaultScanBudget;
  std::uint64_t trials = 10000;
  std::string out;
  std::vector<std::string> checks;
  std::vector<std::string> in;
  std::string kind = "pair";
  std::string suite = "projected";
  std::size_t batches = 100;
  double alpha = 1e-3;
  double abort_limit = 1e-3;
  double tv_threshold = 0.0;
  bool replace_aborted = true;

  std::vector<double> parsed_law() const {
    if (law == "uniform") return {};
    std::vector<double> p;
    std::stringstream ss(law);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        p.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw UsageError("law entries must be numbers: " + item);
      }
    }
    return p;
  }

  CheckOptions options() const {
    if (budget <= 0) throw UsageError("scan budget must be positive");
    if (trials == 0) throw UsageError("trials must be positive");
    CheckOptions opt;
    opt.law = parsed_law();
    opt.alphabet_size = opt.law.empty() ? alphabet_size : opt.law.size();
    if (opt.alphabet_size < 2) throw UsageError("alphabet size must be at least 2");
    opt.seed_base = seed;
    opt.trials = trials;
    opt.radius = radius;
    opt.budget = budget;
    opt.replace_aborted = replace_aborted;
    return opt;
  }

  SuiteConfig suite_config() const {
    SuiteConfig cfg;
    cfg.batches = batches;
    cfg.alpha = alpha;
    cfg.abort_limit = abort_limit;
    if (tv_threshold > 0) cfg.tv_threshold = tv_threshold;
    return cfg;
  }
};

void add_common(CLI::App* app, RunConfig& c) {
  app->add_option("--seed", c.seed, "Seed (or first seed of a batch)");
  app->add_option("--alphabet-size", c.alphabet_size, "Alphabet size K")->check(CLI::Range(2, 64));
  app->add_option("--law", c.law, "\"uniform\" or comma separated probabilities");
  app->add_option("--budget", c.budget, "Scan budget per bracket scan")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "Output path (default stdout)");
}

void add_trials(CLI::App* app, RunConfig& c) {
  app->add_option("--trials", c.trials, "Number of trials")->check(CLI::PositiveNumber);
  app->add_option("--checks", c.checks, "Comma separated checks (default all)")->delimiter(',');
  app->add_option("--abort-limit", c.abort_limit, "Abort rate above which results are degraded");
  app->add_flag("--replace-aborted,!--keep-aborted", c.replace_aborted,
                "Draw extra seeds until the requested trials complete (default on)");
}

void emit(const Json& j, const RunConfig& c, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f || !(f << text)) throw IoFailure("cannot write " + c.out);
}

Json read_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

Json header(const std::string& command, const RunConfig& c, const CheckOptions& opt) {
  Json j;
  j["command"] = command;
  j["seed"] = c.seed;
  j["alphabet_size"] = opt.alphabet_size;
  j["budget"] = opt.budget;
  return j;
}

int exit_code(const std::vector<TestReport>& reports) {
  bool degraded = false;
  for (const auto& r : reports) {
    if (!r.pass) return kExitFail;
    degraded = degraded || r.degraded();
  }
  return degraded ? kExitDegraded : kExitPass;
}

Json reports_json(const std::vector<TestReport>& reports) {
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(io::report_to_json(r));
  return arr;
}

TestReport tally_report(const CheckTally& t, const CheckOptions& opt, double abort_limit) {
  TestReport r;
  r.test = t.name;
  r.trials = t.completed;
  r.aborts = t.aborts;
  r.statistic_name = "failures";
  r.statistic = static_cast<double>(t.failures);
  r.threshold = 0.0;
  r.pass = t.pass();
  r.seed_base = opt.seed_base;
  r.abort_limit = abort_limit;
  r.scans = t.scans;
  return r;
}

using CheckFn = std::function<CheckTally(const CheckOptions&)>;

/// Runs the selected checks. Each name maps to one or more tallies; unknown
/// names are usage errors.
int run_checks(const std::string& command, const RunConfig& c, const CheckOptions& opt,
               const std::vector<std::pair<std::string, std::vector<CheckFn>>>& table,
               const std::map<std::string, std::string>& aliases,
               const std::function<std::vector<TestReport>()>& statistical,
               const std::string& statistical_name, std::ostream& out) {
  std::vector<std::string> selected = c.checks;
  if (selected.empty()) {
    for (const auto& [name, fns] : table) selected.push_back(name);
    if (statistical) selected.push_back(statistical_name);
  }
  std::vector<TestReport> reports;
  Json failures = Json::object();
  for (std::string name : selected) {
    if (const auto it = aliases.find(name); it != aliases.end()) name = it->second;
    if (statistical && name == statistical_name) {
      for (auto& r : statistical()) reports.push_back(std::move(r));
      continue;
    }
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const auto& entry) { return entry.first == name; });
    if (it == table.end()) throw UsageError("unknown check: " + name);
    for (const auto& fn : it->second) {
      const CheckTally t = fn(opt);
      if (!t.first_failure.empty()) failures[t.name] = t.first_failure;
      reports.push_back(tally_report(t, opt, c.abort_limit));
    }
  }
  Json j = header(command, c, opt);
  j["radius"] = opt.radius;
  j["trials"] = opt.trials;
  j["reports"] = reports_json(reports);
  if (!failures.empty()) j["first_failures"] = failures;
  const int code = exit_code(reports);
  j["pass"] = code != kExitFail;
  j["degraded"] = code == kExitDegraded;
  emit(j, c, out);
  return code;
}

std::vector<Word> f2_window(std::size_t radius) {
  auto w = ball_enumerate(GeneratorSet::free_rank2(), radius);
  std::sort(w.begin(), w.end(), ShortlexLess{});
  return w;
}

std::vector<Word> tree_window(std::size_t alphabet_size, std::size_t radius) {
  auto w = ball_enumerate(GeneratorSet::tree(alphabet_size), radius);
  std::sort(w.begin(), w.end(), ShortlexLess{});
  return w;
}

int cmd_sample(const RunConfig& c, std::ostream& out) {
  const CheckOptions opt = c.options();
  if (c.kind != "pair" && c.kind != "plain") throw UsageError("kind must be pair or plain");
  const MeasureSpec m = opt.measure(c.kind == "pair" ? MeasureKind::pair : MeasureKind::plain);
  const LazyConfig x(c.seed, m);
  const GeneratorSet gens = GeneratorSet::free_rank2();
  Json j = header("sample", c, opt);
  j["measure"] = io::measure_to_json(m);
  j["radius"] = c.radius;
  Json window = Json::array();
  for (const auto& g : f2_window(c.radius)) {
    window.push_back({{"word", io::word_to_json(g, gens)}, {"label", io::label_to_json(x.value_at(g))}});
  }
  j["window"] = std::move(window);
  emit(j, c, out);
  return kExitPass;
}

int cmd_rewire_apply(const RunConfig& c, std::ostream& out) {
  const CheckOptions opt = c.options();
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  const LazyConfig x(c.seed, m);
  const RewiringView view(x, opt.budget);
  const GeneratorSet gens = GeneratorSet::free_rank2();
  Json j = header("rewire apply", c, opt);
  j["measure"] = io::measure_to_json(m);
  j["radius"] = c.radius;
  Json window = Json::array();
  for (const auto& g : f2_window(c.radius)) {
    const SymbolPair r = view.at(g);
    window.push_back({{"word", io::word_to_json(g, gens)},
                      {"x", io::label_to_json(x.at(g))},
                      {"rewired", io::label_to_json(r)},
                      {"projected", r.second}});
  }
  j["window"] = std::move(window);
  emit(j, c, out);
  return kExitPass;
}

int cmd_rewire_verify(const RunConfig& c, std::ostream& out) {
  const CheckOptions opt = c.options();
  return run_checks("rewire verify", c, opt,
                    {{"involution", {check_bracket_involution, check_rewiring_involution}},
                     {"coordinates", {check_coordinate_identity}},
                     {"actionable", {check_rewired_actionable}},
                     {"orbit", {check_rewiring_orbit}},
                     {"rerooting", {check_rerooting}}},
                    {{"lemma35", "coordinates"}}, nullptr, "", out);
}

int cmd_contract_apply(const RunConfig& c, std::ostream& out) {
  const CheckOptions opt = c.options();
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  if (!m.is_uniform()) throw UsageError("the contraction requires the uniform law");
  std::uint64_t attempts = 0;
  const LazyConfig y = sample_in_Y(c.seed, m, &attempts);
  const ContractionView z(y, opt.budget);
  const GeneratorSet gens = GeneratorSet::tree(opt.alphabet_size);
  Json j = header("contract apply", c, opt);
  j["accepted_seed"] = y.seed();
  j["attempts"] = attempts;
  j["fradius"] = c.fradius;
  Json window = Json::array();
  for (const auto& f : tree_window(opt.alphabet_size, c.fradius)) {
    window.push_back({{"word", io::word_to_json(f, gens)}, {"label", io::label_to_json(z.at(f))}});
  }
  j["window"] = std::move(window);
  emit(j, c, out);
  return kExitPass;
}

int cmd_contract_invert(const RunConfig& c, std::ostream& out) {
  if (c.in.size() != 1) throw UsageError("invert reads exactly one --in file");
  const Json src = read_json(c.in.front());
  if (!src.contains("alphabet_size") || !src.contains("window")) {
    throw UsageError(c.in.front() + ": expected the output of contract apply");
  }
  const auto k = src["alphabet_size"].get<std::size_t>();
  const GeneratorSet tree = GeneratorSet::tree(k);
  std::unordered_map<Word, RunLabel, WordHash> table;
  for (const auto& entry : src["window"]) {
    table.emplace(io::word_from_json(entry.at("word"), tree), io::run_from_json(entry.at("label")));
  }
  const TableRunField z(k, std::move(table));
  const ExpansionView view(z, c.budget);
  const GeneratorSet f2 = GeneratorSet::free_rank2();
  Json j;
  j["command"] = "contract invert";
  j["source"] = c.in.front();
  j["alphabet_size"] = k;
  j["radius"] = c.radius;
  Json window = Json::array();
  std::size_t unresolved = 0;
  for (const auto& g : f2_window(c.radius)) {
    Json label;
    try {
      label = io::label_to_json(view.at(g));
    } catch (const DomainError&) {
      // Needs run labels outside the input window.
      ++unresolved;
    }
    window.push_back({{"word", io::word_to_json(g, f2)}, {"label", label}});
  }
  j["unresolved"] = unresolved;
  j["window"] = std::move(window);
  emit(j, c, out);
  return unresolved == 0 ? kExitPass : kExitDegraded;
}

int cmd_contract_verify(const RunConfig& c, std::ostream& out) {
  const CheckOptions opt = c.options();
  const auto roundtrip_z = [&c](const CheckOptions& o) {
    CheckOptions t = o;
    t.radius = c.fradius;
    return check_roundtrip_z(t);
  };
  const auto kappa = [&]() {
    SuiteConfig cfg = c.suite_config();
    cfg.batches = std::clamp<std::size_t>(opt.trials / 2000, 1, c.batches);
    return contracted_suite(opt, cfg);
  };
  return run_checks("contract verify", c, opt,
                    {{"tree", {check_contracted_tree}},
                     {"actionable", {check_expanded_actionable}},
                     {"roundtrip", {check_roundtrip_y, roundtrip_z}},
                     {"orbit", {check_contraction_orbit}},
                     {"involution", {check_symbol_involution}}},
                    {}, kappa, "kappa", out);
}

int cmd_measure_test(const RunConfig& c, std::ostream& out) {
  const CheckOptions opt = c.options();
  const SuiteConfig cfg = c.suite_config();
  std::vector<TestReport> reports;
  if (c.suite == "projected") {
    reports = projected_suite(opt, cfg);
  } else if (c.suite == "contracted") {
    reports = contracted_suite(opt, cfg);
  } else if (c.suite == "calibration") {
    reports = calibration_suite(opt, cfg);
  } else {
    throw UsageError("unknown suite: " + c.suite);
  }
  Json j = header("measure-test", c, opt);
  j["suite"] = c.suite;
  j["trials"] = opt.trials;
  j["batches"] = cfg.batches;
  j["alpha"] = cfg.alpha;
  j["reports"] = reports_json(reports);
  const int code = exit_code(reports);
  j["pass"] = code != kExitFail;
  j["degraded"] = code == kExitDegraded;
  emit(j, c, out);
  return code;
}

int cmd_report(const RunConfig& c, std::ostream& out) {
  if (c.in.empty()) throw UsageError("report needs at least one --in file");
  std::vector<TestReport> reports;
  for (const auto& path : c.in) {
    const Json j = read_json(path);
    if (j.contains("reports")) {
      for (const auto& r : j["reports"]) reports.push_back(io::report_from_json(r));
    } else {
      reports.push_back(io::report_from_json(j));
    }
  }
  const int code = exit_code(reports);
  std::size_t passed = 0;
  std::size_t degraded = 0;
  for (const auto& r : reports) {
    passed += r.pass ? 1 : 0;
    degraded += r.degraded() ? 1 : 0;
  }
  if (!c.out.empty()) {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw IoFailure("cannot write " + c.out);
    io::write_reports_csv(f, reports);
    if (!f) throw IoFailure("cannot write " + c.out);
  }
  Json j;
  j["command"] = "report";
  j["files"] = c.in;
  j["reports"] = reports.size();
  j["passed"] = passed;
  j["failed"] = reports.size() - passed;
  j["degraded"] = degraded;
  Json rows = Json::array();
  for (const auto& r : reports) {
    rows.push_back({{"test", r.test},
                    {"trials", r.trials},
                    {"statistic", r.statistic},
                    {"threshold", r.threshold},
                    {"pass", r.pass},
                    {"degraded", r.degraded()}});
  }
  j["summary"] = std::move(rows);
  out << j.dump(2) << "\n";
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rewiring and contraction of configurations over free groups", "freeshift"};
  app.require_subcommand(1);
  RunConfig c;
  std::function<int()> action;
  const auto bind = [&](CLI::App* sub, std::function<int(const RunConfig&, std::ostream&)> fn) {
    sub->callback([&action, &c, &out, fn] { action = [&c, &out, fn] { return fn(c, out); }; });
  };

  auto* sample = app.add_subcommand("sample", "Emit a window of a seeded configuration");
  add_common(sample, c);
  sample->add_option("--radius", c.radius, "Window radius");
  sample->add_option("--kind", c.kind, "pair or plain");
  bind(sample, cmd_sample);

  auto* rewire = app.add_subcommand("rewire", "Edge-rewiring orbit equivalence");
  rewire->alias("oe13");
  rewire->require_subcommand(1);
  auto* rewire_apply = rewire->add_subcommand("apply", "Rewired configuration on a window");
  add_common(rewire_apply, c);
  rewire_apply->add_option("--radius", c.radius, "Window radius");
  bind(rewire_apply, cmd_rewire_apply);
  auto* rewire_verify = rewire->add_subcommand("verify", "Seeded exact checks");
  add_common(rewire_verify, c);
  add_trials(rewire_verify, c);
  rewire_verify->add_option("--radius", c.radius, "Window radius");
  bind(rewire_verify, cmd_rewire_verify);

  auto* contract = app.add_subcommand("contract", "Tree-contraction stable orbit equivalence");
  contract->alias("soe14");
  contract->require_subcommand(1);
  auto* contract_apply = contract->add_subcommand("apply", "Contracted configuration on a window");
  add_common(contract_apply, c);
  contract_apply->add_option("--fradius", c.fradius, "Tree window radius");
  bind(contract_apply, cmd_contract_apply);
  auto* contract_invert = contract->add_subcommand("invert", "Expand a contracted window");
  contract_invert->add_option("--in", c.in, "Output of contract apply")->required();
  contract_invert->add_option("--radius", c.radius, "F2 window radius");
  contract_invert->add_option("--budget", c.budget, "Scan budget")->check(CLI::PositiveNumber);
  contract_invert->add_option("--out", c.out, "Output path (default stdout)");
  bind(contract_invert, cmd_contract_invert);
  auto* contract_verify = contract->add_subcommand("verify", "Seeded exact and statistical checks");
  add_common(contract_verify, c);
  add_trials(contract_verify, c);
  contract_verify->add_option("--radius", c.radius, "F2 window radius");
  contract_verify->add_option("--fradius", c.fradius, "Tree window radius");
  contract_verify->add_option("--batches", c.batches, "Independence batches (at most)");
  bind(contract_verify, cmd_contract_verify);

  auto* measure = app.add_subcommand("measure-test", "Statistical suites");
  add_common(measure, c);
  measure->add_option("--suite", c.suite, "projected, contracted or calibration");
  measure->add_option("--trials", c.trials, "Number of trials")->check(CLI::PositiveNumber);
  measure->add_option("--batches", c.batches, "Independence batches")->check(CLI::PositiveNumber);
  measure->add_option("--alpha", c.alpha, "Significance level");
  measure->add_option("--tv-threshold", c.tv_threshold, "Override the TV bound");
  measure->add_option("--abort-limit", c.abort_limit, "Abort rate above which results are degraded");
  bind(measure, cmd_measure_test);

  auto* report = app.add_subcommand("report", "Aggregate JSON reports");
  report->add_option("--in", c.in, "Report files")->required();
  report->add_option("--out", c.out, "CSV output path");
  bind(report, cmd_report);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitPass : kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const IoFailure& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScanBudgetExceeded& e) {
    err << "scan budget exceeded: " << e.what() << "\n";
    return kExitDegraded;
  } catch (const Json::exception& e) {
    err << "malformed input: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace freeshift
