#include "freeshift/checks.hpp"

#include <functional>
#include <cmath>

#include "freeshift/contraction.hpp"
#include "freeshift/errors.hpp"
#include "freeshift/network.hpp"
#include "freeshift/rewiring.hpp"

namespace freeshift {

MeasureSpec CheckOptions::measure(MeasureKind kind) const {
  if (law.empty()) return MeasureSpec::uniform(kind, alphabet_size);
  if (law.size() != alphabet_size) throw UsageError("law length differs from the alphabet size");
  return MeasureSpec(kind, law);
}

double CheckTally::abort_rate() const {
  return scans == 0 ? 0.0 : static_cast<double>(aborts) / static_cast<double>(scans);
}

Word random_word(std::mt19937_64& rng, std::size_t rank, std::size_t max_length) {
  std::uniform_int_distribution<std::size_t> len_dist(0, max_length);
  const std::size_t len = len_dist(rng);
  std::uniform_int_distribution<std::size_t> letter_dist(0, 2 * rank - 1);
  std::vector<Letter> letters;
  while (letters.size() < len) {
    const std::size_t c = letter_dist(rng);
    const Letter l{static_cast<Generator>(c % rank), c < rank ? 1 : -1};
    if (!letters.empty() && letters.back() == l.inverse()) continue;
    letters.push_back(l);
  }
  return Word::from_letters(rank, letters);
}

namespace {

/// A trial returns an empty string on success, a description on failure.
using Trial = std::function<std::string(std::uint64_t seed)>;

CheckTally run_trials(const std::string& name, const CheckOptions& opt, const Trial& trial) {
  CheckTally t;
  t.name = name;
  const std::uint64_t max_seeds = opt.replace_aborted ? opt.trials * opt.max_attempt_factor : opt.trials;
  for (std::uint64_t i = 0; i < max_seeds && t.completed < opt.trials; ++i) {
    const std::uint64_t seed = opt.seed_base + i;
    ++t.seeds_used;
    const std::uint64_t scans_before = bracket_scans_started();
    try {
      const std::string failure = trial(seed);
      ++t.completed;
      if (!failure.empty()) {
        ++t.failures;
        if (t.first_failure.empty()) t.first_failure = "seed " + std::to_string(seed) + ": " + failure;
      }
    } catch (const ScanBudgetExceeded&) {
      ++t.aborts;
    } catch (const std::exception& e) {
      ++t.completed;
      ++t.failures;
      if (t.first_failure.empty()) t.first_failure = "seed " + std::to_string(seed) + ": " + e.what();
    }
    t.scans += bracket_scans_started() - scans_before;
  }
  return t;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::string_view tag) {
  return std::mt19937_64(hashing::combine(seed, hashing::tag_key(tag)));
}

const GeneratorSet& f2() {
  static const GeneratorSet g = GeneratorSet::free_rank2();
  return g;
}

}  // namespace

CheckTally check_bracket_involution(const CheckOptions& opt) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  return run_trials("bracket_involution", opt, [&](std::uint64_t seed) -> std::string {
    const LazyConfig x(seed, m);
    auto rng = trial_rng(seed, "bracket");
    const Word g = random_word(rng, 2, 6);
    const PairingScan p = bracket_partner(x, g, opt.budget);
    const Word back = bracket_partner(x, p.partner, opt.budget).partner;
    if (back != g) return "partner of partner of " + to_string(g, f2()) + " is " + to_string(back, f2());
    return {};
  });
}

CheckTally check_symbol_involution(const CheckOptions& opt) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  return run_trials("symbol_involution", opt, [&](std::uint64_t seed) -> std::string {
    const LazyConfig y(seed, m);
    auto rng = trial_rng(seed, "symbol");
    const Word g = random_word(rng, 2, 6);
    std::uniform_int_distribution<Symbol> kd(1, static_cast<Symbol>(opt.alphabet_size));
    const Symbol k = kd(rng);
    const Word p = symbol_partner(y, g, k, opt.budget);
    const Word back = symbol_partner(y, p, k, opt.budget);
    if (back != g) {
      return "k=" + std::to_string(k) + " partner of partner of " + to_string(g, f2()) + " is " +
             to_string(back, f2());
    }
    return {};
  });
}

CheckTally check_rewiring_involution(const CheckOptions& opt) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  const auto window = ball_enumerate(f2(), opt.radius);
  return run_trials("rewiring_involution", opt, [&](std::uint64_t seed) -> std::string {
    const LazyConfig x(seed, m);
    const RewiringView once(x, opt.budget);
    const RewiringView twice(once, opt.budget);
    for (const auto& g : window) {
      if (twice.at(g) != x.at(g)) return "double rewiring differs at " + to_string(g, f2());
    }
    return {};
  });
}

CheckTally check_coordinate_identity(const CheckOptions& opt) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  const auto window = ball_enumerate(f2(), opt.radius);
  return run_trials("coordinate_identity", opt, [&](std::uint64_t seed) -> std::string {
    const LazyConfig x(seed, m);
    const RewiringView w(x, opt.budget);
    for (const auto& g : window) {
      if (w.at(g.times(kGenB, 1)).first != w.at(g).second) {
        return "first coordinate at g·b differs from second at g for g = " + to_string(g, f2());
      }
    }
    return {};
  });
}

CheckTally check_rewired_actionable(const CheckOptions& opt) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  const auto words = ball_enumerate(f2(), std::min<std::size_t>(opt.radius, 4));
  return run_trials("rewired_actionable", opt, [&](std::uint64_t seed) -> std::string {
    const LazyConfig x(seed, m);
    const RewiredNetwork net(x, opt.budget);
    if (!is_actionable(ball(net, opt.radius), 2)) return "rewired ball not actionable";
    const RewiringView view(x, opt.budget);
    const Vertex root = net.root();
    for (const auto& g : words) {
      if (act(net, root, g).word != view.position(g)) {
        return "traversal and position recursion differ at " + to_string(g, f2());
      }
    }
    return {};
  });
}

CheckTally check_rewiring_orbit(const CheckOptions& opt) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  const std::vector<Word> moves{Word::generator(2, kGenA, 1), Word::generator(2, kGenA, -1),
                                Word::generator(2, kGenB, 1), Word::generator(2, kGenB, -1)};
  return run_trials("rewiring_orbit", opt, [&](std::uint64_t seed) -> std::string {
    const LazyConfig x(seed, m);
    for (const auto& h : moves) {
      const OrbitWitness w = rewiring_orbit_witness(x, h, 2, 2, opt.budget);
      if (w.matches != 1) {
        return std::to_string(w.matches) + " witnesses for move " + to_string(h, f2());
      }
    }
    return {};
  });
}

CheckTally check_contracted_tree(const CheckOptions& opt) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  return run_trials("contracted_tree", opt, [&](std::uint64_t seed) -> std::string {
    const LazyConfig y = sample_in_Y(seed, m);
    const ContractedNetwork net(y, opt.budget);
    const FiniteBall b = ball(net, opt.radius);
    if (!is_forest(b)) return "contracted ball has a cycle";
    if (!is_actionable(b, opt.alphabet_size + 1)) return "contracted ball not actionable";
    return {};
  });
}

CheckTally check_expanded_actionable(const CheckOptions& opt) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  return run_trials("expanded_actionable", opt, [&](std::uint64_t seed) -> std::string {
    const LazyConfig y = sample_in_Y(seed, m);
    const ContractionView z(y, opt.budget);
    const ExpandedNetwork net(z, opt.budget);
    if (!is_actionable(ball(net, opt.radius), 2)) return "expanded ball not actionable";
    return {};
  });
}

CheckTally check_roundtrip_y(const CheckOptions& opt) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  const auto window = ball_enumerate(f2(), opt.radius);
  return run_trials("roundtrip_y", opt, [&](std::uint64_t seed) -> std::string {
    const LazyConfig y = sample_in_Y(seed, m);
    const ContractionView z(y, opt.budget);
    const ExpansionView back(z, opt.budget);
    for (const auto& g : window) {
      if (back.at(g) != y.at(g)) return "expansion of contraction differs at " + to_string(g, f2());
    }
    return {};
  });
}

CheckTally check_roundtrip_z(const CheckOptions& opt) {
  const GeneratorSet tree = GeneratorSet::tree(opt.alphabet_size);
  const auto window = ball_enumerate(tree, opt.radius);
  return run_trials("roundtrip_z", opt, [&](std::uint64_t seed) -> std::string {
    const IidRunField z(seed, opt.alphabet_size);
    const ExpansionView y(z, opt.budget);
    const ContractionView back(y, opt.budget);
    for (const auto& f : window) {
      if (back.at(f) != z.at(f)) return "contraction of expansion differs at " + to_string(f, tree);
    }
    return {};
  });
}

CheckTally check_contraction_orbit(const CheckOptions& opt) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  const GeneratorSet tree = GeneratorSet::tree(opt.alphabet_size);
  const std::size_t rank = tree.rank();
  return run_trials("contraction_orbit", opt, [&](std::uint64_t seed) -> std::string {
    const LazyConfig y = sample_in_Y(seed, m);
    const Word e(2);
    const std::int64_t next = next_run_start(y, e, 1, opt.budget);
    const std::int64_t prev = next_run_start(y, e, -1, opt.budget);
    // (move h, expected witness): h^-1 is the neighbor of the root reached
    // by the inverse of the witness.
    const std::vector<std::pair<Word, Word>> moves{
        {Word::power(2, kGenA, -next), Word::generator(rank, kRayGen, -1)},
        {Word::power(2, kGenA, -prev), Word::generator(rank, kRayGen, 1)},
        {Word::generator(2, kGenB, 1), Word::generator(rank, 1, 1)},
        {Word::generator(2, kGenB, -1), Word::generator(rank, 1, -1)},
    };
    for (const auto& [h, expected] : moves) {
      const TreeWitness w = contraction_orbit_witness(y, h, 2, 2, opt.budget);
      if (w.matches != 1) return std::to_string(w.matches) + " witnesses for " + to_string(h, f2());
      if (w.element != expected) {
        return "witness " + to_string(w.element, tree) + " for " + to_string(h, f2()) +
               ", expected " + to_string(expected, tree);
      }
    }
    return {};
  });
}

CheckTally check_rerooting(const CheckOptions& opt) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  return run_trials("rerooting", opt, [&](std::uint64_t seed) -> std::string {
    const LazyConfig x(seed, m);
    auto rng = trial_rng(seed, "reroot");
    const Word g = random_word(rng, 2, 4);
    const ShiftedPairField moved(x, g);
    const auto lhs = network_from_field(moved);
    const auto base = network_from_field(x);
    const RerootedNetwork rhs(base, {g.inverse(), 0});
    if (!ball_isomorphic(ball(lhs, opt.radius), ball(rhs, opt.radius))) {
      return "rerooted ball differs for g = " + to_string(g, f2());
    }
    return {};
  });
}

namespace {

Sample sample_window(const std::string& prefix, const CheckOptions& opt, std::size_t size,
                     const Sampler& sampler) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < size; ++i) names.push_back(prefix + std::to_string(i));
  return collect(std::move(names), sampler, opt.trials, opt.seed_base);
}

std::vector<std::string> names_of(const std::vector<Word>& window, const GeneratorSet& gens) {
  std::vector<std::string> names;
  for (const auto& w : window) names.push_back(to_string(w, gens));
  return names;
}

}  // namespace

Sample sample_projected(const CheckOptions& opt, const std::vector<Word>& window) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  Sample s = sample_window("", opt, window.size(), [&](std::uint64_t seed) {
    const LazyConfig x(seed, m);
    const RewiringView view(x, opt.budget);
    Outcome o;
    for (const auto& g : window) o.push_back(encode(view.at(g).second));
    return o;
  });
  s.window = names_of(window, f2());
  return s;
}

Sample sample_direct_pairs(const CheckOptions& opt, const std::vector<Word>& window) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  Sample s = sample_window("", opt, window.size(), [&](std::uint64_t seed) {
    const LazyConfig x(seed, m);
    Outcome o;
    for (const auto& g : window) o.push_back(encode(x.at(g).second));
    return o;
  });
  s.window = names_of(window, f2());
  return s;
}

Sample sample_contracted(const CheckOptions& opt, const std::vector<Word>& window) {
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  if (!m.is_uniform()) throw UsageError("the contraction requires the uniform law");
  Sample s = sample_window("", opt, window.size(), [&](std::uint64_t seed) {
    const LazyConfig y = sample_in_Y(seed, m);
    const ContractionView z(y, opt.budget);
    Outcome o;
    for (const auto& f : window) o.push_back(encode(z.at(f)));
    return o;
  });
  s.window = names_of(window, GeneratorSet::tree(opt.alphabet_size));
  return s;
}

Sample sample_direct_runs(const CheckOptions& opt, const std::vector<Word>& window) {
  Sample s = sample_window("", opt, window.size(), [&](std::uint64_t seed) {
    const IidRunField z(seed, opt.alphabet_size);
    Outcome o;
    for (const auto& f : window) o.push_back(encode(z.at(f)));
    return o;
  });
  s.window = names_of(window, GeneratorSet::tree(opt.alphabet_size));
  return s;
}

BatchIndependence batch_independence(const Sample& s, std::size_t batches,
                                     const std::vector<std::size_t>& block_a,
                                     const std::vector<std::size_t>& block_b, double alpha,
                                     const std::function<Outcome(const Outcome&)>& coarsen) {
  if (batches == 0) throw UsageError("need at least one batch");
  BatchIndependence r;
  r.batches = batches;
  const std::size_t per = s.outcomes.size() / batches;
  for (std::size_t b = 0; b < batches; ++b) {
    EmpiricalTable t;
    t.window = s.window;
    for (std::size_t i = b * per; i < (b + 1) * per; ++i) {
      t.add(coarsen ? coarsen(s.outcomes[i]) : s.outcomes[i]);
    }
    const ChiSquareResult c = chi_square_independence(t, block_a, block_b);
    if (c.inconclusive) {
      ++r.inconclusive;
      continue;
    }
    r.p_values.push_back(c.p_value);
    if (c.p_value > alpha) ++r.passed;
  }
  return r;
}

}  // namespace freeshift

namespace freeshift {

namespace {

TestReport make_report(std::string test, const Sample& s, std::string statistic_name,
                       double statistic, double threshold, bool pass, double abort_limit) {
  TestReport r;
  r.test = std::move(test);
  r.window = s.window;
  r.trials = s.outcomes.size();
  r.aborts = s.aborts;
  r.statistic_name = std::move(statistic_name);
  r.statistic = statistic;
  r.threshold = threshold;
  r.pass = pass;
  r.seed_base = s.seed_base;
  r.abort_limit = abort_limit;
  return r;
}

TestReport independence_report(std::string test, const Sample& s, const BatchIndependence& b,
                               const SuiteConfig& cfg) {
  const double needed = std::ceil(cfg.min_pass_fraction * static_cast<double>(b.batches) - 1e-9);
  return make_report(std::move(test), s, "batches_passing", static_cast<double>(b.passed), needed,
                     static_cast<double>(b.passed) >= needed, cfg.abort_limit);
}

}  // namespace

namespace {

std::vector<Word> projected_window() {
  const Word a = Word::generator(2, kGenA);
  const Word b = Word::generator(2, kGenB);
  return {Word(2), a, b, a * b, a.inverse()};
}

std::vector<Word> contracted_window(std::size_t alphabet_size) {
  const std::size_t rank = alphabet_size + 1;
  return {Word(rank), Word::generator(rank, 0), Word::generator(rank, 1), Word::generator(rank, 2)};
}

std::vector<TestReport> analyze_projected(const Sample& s, const CheckOptions& opt,
                                          const SuiteConfig& cfg, const std::string& prefix) {
  const MeasureSpec m = opt.measure(MeasureKind::plain);
  std::vector<SiteLaw> sites(s.window.size(), [law = m.law()](const SiteOutcome& o) {
    return o.size() == 1 && o[0] >= 1 && static_cast<std::size_t>(o[0]) <= law.size()
               ? law[static_cast<std::size_t>(o[0] - 1)]
               : 0.0;
  });
  const EmpiricalTable table = tabulate(s.window, s.outcomes);
  const double tv = tv_distance(table, product_law(std::move(sites)));
  const double space =
      std::pow(static_cast<double>(opt.alphabet_size), static_cast<double>(s.window.size()));
  const double bound =
      cfg.tv_threshold.value_or(2.0 * std::sqrt(space / static_cast<double>(table.trials)));

  std::vector<TestReport> out;
  out.push_back(make_report(prefix + "_tv", s, "tv", tv, bound, tv <= bound, cfg.abort_limit));
  const auto b = batch_independence(s, cfg.batches, {0, 1, 4}, {2, 3}, cfg.alpha);
  out.push_back(independence_report(prefix + "_independence", s, b, cfg));
  return out;
}

std::vector<TestReport> analyze_contracted(const Sample& s, const CheckOptions& opt,
                                           const SuiteConfig& cfg, const std::string& prefix) {
  std::vector<TestReport> out;
  EmpiricalTable root;
  root.window = {s.window.front()};
  std::vector<std::uint64_t> sizes;
  sizes.reserve(s.outcomes.size());
  for (const auto& o : s.outcomes) {
    root.add({o.front()});
    sizes.push_back(o.front().size() / 2);
  }
  const std::size_t k = opt.alphabet_size;
  const double tv =
      tv_distance(root, [k](const Outcome& o) { return run_label_pmf(k, decode_run(o.front())); });
  const double bound = cfg.tv_threshold.value_or(0.02);
  out.push_back(make_report(prefix + "_label_tv", s, "tv", tv, bound, tv <= bound, cfg.abort_limit));

  const LengthLawFit fit = length_law_fit(sizes, k);
  out.push_back(make_report(prefix + "_size_tv", s, "tv", fit.tv, cfg.length_tv_threshold,
                            fit.tv <= cfg.length_tv_threshold, cfg.abort_limit));
  out.push_back(make_report(prefix + "_size_chi2", s, "p_value", fit.chi_square.p_value, cfg.alpha,
                            !fit.chi_square.inconclusive && fit.chi_square.p_value > cfg.alpha,
                            cfg.abort_limit));

  // Per site: (min(size, 2), second coordinate of the first entry).
  const auto coarsen = [](const Outcome& o) {
    Outcome c;
    for (const auto& site : o) {
      c.push_back({static_cast<std::int32_t>(std::min<std::size_t>(site.size() / 2, 2)), site[1]});
    }
    return c;
  };
  const auto b = batch_independence(s, cfg.batches, {0, 1}, {2, 3}, cfg.alpha, coarsen);
  out.push_back(independence_report(prefix + "_independence", s, b, cfg));
  return out;
}

/// A planted sample must be rejected: the report passes iff the test failed.
void append_rejections(std::vector<TestReport>& out, std::vector<TestReport> planted) {
  for (auto& r : planted) {
    r.test += "_rejected";
    r.pass = !r.pass;
    out.push_back(std::move(r));
  }
}

}  // namespace

std::vector<TestReport> projected_suite(const CheckOptions& opt, const SuiteConfig& cfg, bool direct) {
  const auto window = projected_window();
  const Sample s = direct ? sample_direct_pairs(opt, window) : sample_projected(opt, window);
  return analyze_projected(s, opt, cfg, direct ? "direct_pairs" : "projected");
}

std::vector<TestReport> contracted_suite(const CheckOptions& opt, const SuiteConfig& cfg, bool direct) {
  const auto window = contracted_window(opt.alphabet_size);
  const Sample s = direct ? sample_direct_runs(opt, window) : sample_contracted(opt, window);
  return analyze_contracted(s, opt, cfg, direct ? "direct_runs" : "contracted");
}

Sample sample_planted_pairs(const CheckOptions& opt) {
  const auto window = projected_window();
  const MeasureSpec m = opt.measure(MeasureKind::pair);
  Sample s = sample_window("", opt, window.size(), [&](std::uint64_t seed) {
    const LazyConfig x(seed, m);
    Outcome o;
    for (const auto& g : window) o.push_back(encode(x.at(g).second));
    // The b-site copies e and the ab-site copies a.
    o[2] = o[0];
    o[3] = o[1];
    return o;
  });
  s.window = names_of(window, f2());
  return s;
}

Sample sample_planted_runs(const CheckOptions& opt) {
  const auto window = contracted_window(opt.alphabet_size);
  Sample s = sample_window("", opt, window.size(), [&](std::uint64_t seed) {
    const IidRunField z(seed, opt.alphabet_size);
    // Every site carries the single-entry head of the label at e.
    const RunLabel head({z.at(window.front()).entries().front()});
    return Outcome(window.size(), encode(head));
  });
  s.window = names_of(window, GeneratorSet::tree(opt.alphabet_size));
  return s;
}

std::vector<TestReport> calibration_suite(const CheckOptions& opt, const SuiteConfig& cfg) {
  std::vector<TestReport> out;
  for (auto& r : projected_suite(opt, cfg, true)) out.push_back(std::move(r));
  CheckOptions runs = opt;
  runs.law.clear();
  for (auto& r : contracted_suite(runs, cfg, true)) out.push_back(std::move(r));
  append_rejections(out, analyze_projected(sample_planted_pairs(opt), opt, cfg, "planted_pairs"));
  append_rejections(out, analyze_contracted(sample_planted_runs(runs), runs, cfg, "planted_runs"));
  return out;
}

}  // namespace freeshift
