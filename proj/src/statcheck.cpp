#include "freeshift/statcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "freeshift/contraction.hpp"
#include "freeshift/errors.hpp"

namespace freeshift {

SiteOutcome encode(Symbol s) { return {static_cast<std::int32_t>(s)}; }

SiteOutcome encode(const SymbolPair& p) {
  return {static_cast<std::int32_t>(p.first), static_cast<std::int32_t>(p.second)};
}

SiteOutcome encode(const RunLabel& r) {
  SiteOutcome o;
  o.reserve(2 * r.size());
  for (const auto& p : r.entries()) {
    o.push_back(static_cast<std::int32_t>(p.first));
    o.push_back(static_cast<std::int32_t>(p.second));
  }
  return o;
}

RunLabel decode_run(const SiteOutcome& o) {
  if (o.empty() || o.size() % 2 != 0) throw UsageError("not an encoded run label");
  std::vector<SymbolPair> entries;
  for (std::size_t i = 0; i < o.size(); i += 2) {
    entries.push_back({static_cast<Symbol>(o[i]), static_cast<Symbol>(o[i + 1])});
  }
  return RunLabel(std::move(entries));
}

double Sample::abort_rate() const {
  return attempted == 0 ? 0.0 : static_cast<double>(aborts) / static_cast<double>(attempted);
}

Sample collect(std::vector<std::string> window, const Sampler& sampler, std::uint64_t trials,
               std::uint64_t seed_base) {
  if (trials == 0) throw UsageError("trials must be positive");
  Sample s;
  s.window = std::move(window);
  s.seed_base = seed_base;
  s.attempted = trials;
  s.outcomes.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    try {
      s.outcomes.push_back(sampler(seed_base + t));
    } catch (const ScanBudgetExceeded&) {
      ++s.aborts;
    }
  }
  return s;
}

void EmpiricalTable::merge(const EmpiricalTable& other) {
  if (window != other.window) throw UsageError("merging tables over different windows");
  for (const auto& [o, c] : other.counts) counts[o] += c;
  trials += other.trials;
}

EmpiricalTable tabulate(const std::vector<std::string>& window, const std::vector<Outcome>& outcomes,
                        std::size_t begin, std::size_t end) {
  EmpiricalTable t;
  t.window = window;
  end = std::min(end, outcomes.size());
  for (std::size_t i = begin; i < end; ++i) t.add(outcomes[i]);
  return t;
}

Reference product_law(std::vector<SiteLaw> sites) {
  return [sites = std::move(sites)](const Outcome& o) {
    if (o.size() != sites.size()) return 0.0;
    double p = 1.0;
    for (std::size_t i = 0; i < sites.size(); ++i) p *= sites[i](o[i]);
    return p;
  };
}

double tv_distance(const EmpiricalTable& table, const Reference& reference) {
  if (table.trials == 0) throw UsageError("empty table");
  const double n = static_cast<double>(table.trials);
  double diff = 0.0;
  double covered = 0.0;
  for (const auto& [o, c] : table.counts) {
    const double p = reference(o);
    diff += std::abs(static_cast<double>(c) / n - p);
    covered += p;
  }
  return 0.5 * (diff + std::max(0.0, 1.0 - covered));
}

namespace {

double chi_square_sf(double statistic, std::size_t dof) {
  boost::math::chi_squared dist(static_cast<double>(dof));
  return boost::math::cdf(boost::math::complement(dist, std::max(0.0, statistic)));
}

Outcome project(const Outcome& o, const std::vector<std::size_t>& block) {
  Outcome p;
  p.reserve(block.size());
  for (const std::size_t i : block) p.push_back(o.at(i));
  return p;
}

// Merges the two smallest categories (by marginal count) of one side.
void merge_smallest(std::vector<std::vector<std::uint64_t>>& cells, bool rows) {
  const std::size_t n = rows ? cells.size() : cells.front().size();
  std::vector<std::pair<std::uint64_t, std::size_t>> totals(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t sum = 0;
    for (std::size_t j = 0; j < (rows ? cells.front().size() : cells.size()); ++j) {
      sum += rows ? cells[i][j] : cells[j][i];
    }
    totals[i] = {sum, i};
  }
  std::sort(totals.begin(), totals.end());
  const std::size_t keep = std::min(totals[0].second, totals[1].second);
  const std::size_t drop = std::max(totals[0].second, totals[1].second);
  if (rows) {
    for (std::size_t j = 0; j < cells[keep].size(); ++j) cells[keep][j] += cells[drop][j];
    cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(drop));
  } else {
    for (auto& row : cells) {
      row[keep] += row[drop];
      row.erase(row.begin() + static_cast<std::ptrdiff_t>(drop));
    }
  }
}

}  // namespace

ChiSquareResult chi_square_independence(const EmpiricalTable& table,
                                        const std::vector<std::size_t>& block_a,
                                        const std::vector<std::size_t>& block_b,
                                        double min_expected) {
  if (block_a.empty() || block_b.empty()) throw UsageError("blocks must be nonempty");
  std::map<Outcome, std::size_t> row_index;
  std::map<Outcome, std::size_t> col_index;
  for (const auto& [o, c] : table.counts) {
    row_index.emplace(project(o, block_a), 0);
    col_index.emplace(project(o, block_b), 0);
  }
  std::size_t r = 0;
  for (auto& [k, v] : row_index) v = r++;
  std::size_t q = 0;
  for (auto& [k, v] : col_index) v = q++;

  std::vector<std::vector<std::uint64_t>> cells(r, std::vector<std::uint64_t>(q, 0));
  for (const auto& [o, c] : table.counts) {
    cells[row_index[project(o, block_a)]][col_index[project(o, block_b)]] += c;
  }

  const double n = static_cast<double>(table.trials);
  ChiSquareResult result;
  for (;;) {
    const std::size_t rows = cells.size();
    const std::size_t cols = cells.front().size();
    if (rows < 2 || cols < 2) {
      result.inconclusive = true;
      result.rows = rows;
      result.cols = cols;
      return result;
    }
    std::vector<double> rt(rows, 0.0);
    std::vector<double> ct(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        rt[i] += static_cast<double>(cells[i][j]);
        ct[j] += static_cast<double>(cells[i][j]);
      }
    }
    const double min_row = *std::min_element(rt.begin(), rt.end());
    const double min_col = *std::min_element(ct.begin(), ct.end());
    if (min_row * min_col / n < min_expected) {
      // Coarsen whichever side has the rarer category.
      merge_smallest(cells, min_row <= min_col);
      continue;
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        const double e = rt[i] * ct[j] / n;
        const double d = static_cast<double>(cells[i][j]) - e;
        stat += d * d / e;
      }
    }
    result.statistic = stat;
    result.dof = (rows - 1) * (cols - 1);
    result.p_value = chi_square_sf(stat, result.dof);
    result.rows = rows;
    result.cols = cols;
    return result;
  }
}

ChiSquareResult chi_square_fit(const std::vector<std::uint64_t>& counts,
                               const std::vector<double>& probabilities, double tail_mass,
                               double min_expected) {
  if (counts.size() != probabilities.size()) throw UsageError("count and probability sizes differ");
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  ChiSquareResult result;
  if (n == 0) {
    result.inconclusive = true;
    return result;
  }
  // Bins from the front while they carry enough expected mass; the rest
  // (plus the reference tail) form the last bucket.
  std::vector<double> observed;
  std::vector<double> expected;
  std::size_t i = 0;
  double rest_obs = 0.0;
  double rest_exp = tail_mass * n;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    rest_obs += static_cast<double>(counts[j]);
    rest_exp += probabilities[j] * n;
  }
  for (; i < counts.size(); ++i) {
    const double e = probabilities[i] * n;
    const double rest_after = rest_exp - e;
    if (e < min_expected || rest_after < min_expected) break;
    observed.push_back(static_cast<double>(counts[i]));
    expected.push_back(e);
    rest_obs -= static_cast<double>(counts[i]);
    rest_exp = rest_after;
  }
  observed.push_back(rest_obs);
  expected.push_back(rest_exp);
  if (observed.size() < 2) {
    result.inconclusive = true;
    result.rows = observed.size();
    return result;
  }
  double stat = 0.0;
  for (std::size_t j = 0; j < observed.size(); ++j) {
    const double d = observed[j] - expected[j];
    stat += d * d / expected[j];
  }
  result.statistic = stat;
  result.dof = observed.size() - 1;
  result.p_value = chi_square_sf(stat, result.dof);
  result.rows = observed.size();
  result.cols = 1;
  return result;
}

LengthLawFit length_law_fit(const std::vector<std::uint64_t>& sizes, std::size_t alphabet_size) {
  LengthLawFit fit;
  fit.samples = sizes.size();
  if (sizes.empty()) {
    fit.chi_square.inconclusive = true;
    return fit;
  }
  std::uint64_t longest = 1;
  double total = 0.0;
  for (const auto m : sizes) {
    if (m == 0) throw UsageError("run sizes start at 1");
    longest = std::max(longest, m);
    total += static_cast<double>(m);
  }
  fit.mean = total / static_cast<double>(sizes.size());
  std::vector<std::uint64_t> counts(longest, 0);
  std::vector<double> probs(longest, 0.0);
  for (const auto m : sizes) ++counts[m - 1];
  double covered = 0.0;
  double diff = 0.0;
  const double n = static_cast<double>(sizes.size());
  for (std::size_t m = 1; m <= longest; ++m) {
    probs[m - 1] = run_size_pmf(alphabet_size, m);
    covered += probs[m - 1];
    diff += std::abs(static_cast<double>(counts[m - 1]) / n - probs[m - 1]);
  }
  const double tail = std::max(0.0, 1.0 - covered);
  fit.tv = 0.5 * (diff + tail);
  fit.chi_square = chi_square_fit(counts, probs, tail);
  return fit;
}

KsResult ks_uniform(std::vector<double> values) {
  if (values.empty()) throw UsageError("no values");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double u = std::clamp(values[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
  }
  KsResult r;
  r.statistic = d;
  r.critical = 1.63 / std::sqrt(n);
  r.pass = d <= r.critical;
  return r;
}

double TestReport::abort_rate() const {
  if (scans > 0) return static_cast<double>(aborts) / static_cast<double>(scans);
  const std::uint64_t attempted = trials + aborts;
  return attempted == 0 ? 0.0 : static_cast<double>(aborts) / static_cast<double>(attempted);
}

bool TestReport::degraded() const { return abort_rate() > abort_limit; }

}  // namespace freeshift
