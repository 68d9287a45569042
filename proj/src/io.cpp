#include "freeshift/io.hpp"

#include <iomanip>
#include <sstream>
#include <type_traits>

#include "freeshift/errors.hpp"

namespace freeshift::io {

Json word_to_json(const Word& w, const GeneratorSet& gens) {
  Json j = Json::array();
  for (const auto& t : to_tokens(w, gens)) j.push_back(t);
  return j;
}

Word word_from_json(const Json& j, const GeneratorSet& gens) {
  if (!j.is_array()) throw UsageError("a word is a JSON array of generator tokens");
  std::vector<std::string> tokens;
  for (const auto& t : j) {
    if (!t.is_string()) throw UsageError("word tokens must be strings");
    tokens.push_back(t.get<std::string>());
  }
  return from_tokens(tokens, gens);
}

Json label_to_json(const VertexLabel& l) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Symbol>) {
          return v;
        } else if constexpr (std::is_same_v<T, SymbolPair>) {
          return Json::array({v.first, v.second});
        } else {
          Json out = Json::array();
          for (const auto& p : v.entries()) out.push_back(Json::array({p.first, p.second}));
          return out;
        }
      },
      l);
}

SymbolPair pair_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() || !j[1].is_number_unsigned()) {
    throw UsageError("a pair is a JSON array of two positive integers");
  }
  return {j[0].get<Symbol>(), j[1].get<Symbol>()};
}

RunLabel run_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw UsageError("a run label is a nonempty array of pairs");
  std::vector<SymbolPair> entries;
  for (const auto& p : j) entries.push_back(pair_from_json(p));
  return RunLabel(std::move(entries));
}

namespace {

VertexLabel label_from_json(const Json& j) {
  if (j.is_number_unsigned()) return j.get<Symbol>();
  if (j.is_array() && !j.empty() && j[0].is_array()) return run_from_json(j);
  return pair_from_json(j);
}

Json gens_to_json(const GeneratorSet& g) { return g.names(); }

GeneratorSet gens_from_json(const Json& j) {
  return GeneratorSet(j.get<std::vector<std::string>>());
}

}  // namespace

Json measure_to_json(const MeasureSpec& m) {
  return Json{{"kind", m.kind() == MeasureKind::pair ? "pair" : "plain"}, {"law", m.law()}};
}

MeasureSpec measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("law")) {
    throw UsageError("measure needs \"kind\" and \"law\"");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "pair" && kind != "plain") throw UsageError("measure kind is \"pair\" or \"plain\"");
  return MeasureSpec(kind == "pair" ? MeasureKind::pair : MeasureKind::plain,
                     j.at("law").get<std::vector<double>>());
}

Json ball_to_json(const FiniteBall& b) {
  Json vertices = Json::array();
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    vertices.push_back({{"word", word_to_json(b.vertices[i].word, b.vertex_generators)},
                        {"index", b.vertices[i].index},
                        {"distance", b.distance[i]},
                        {"label", label_to_json(b.labels[i])}});
  }
  Json edges = Json::array();
  for (const auto& e : b.edges) {
    edges.push_back(Json::array({e.source, e.target, b.edge_labels.name(e.label)}));
  }
  return Json{{"radius", b.radius},
              {"root", 0},
              {"edge_labels", gens_to_json(b.edge_labels)},
              {"vertex_generators", gens_to_json(b.vertex_generators)},
              {"vertices", vertices},
              {"edges", edges}};
}

FiniteBall ball_from_json(const Json& j) {
  FiniteBall b;
  b.radius = j.at("radius").get<std::size_t>();
  b.edge_labels = gens_from_json(j.at("edge_labels"));
  b.vertex_generators = gens_from_json(j.at("vertex_generators"));
  for (const auto& v : j.at("vertices")) {
    b.vertices.push_back({word_from_json(v.at("word"), b.vertex_generators),
                          v.value("index", std::int64_t{0})});
    b.distance.push_back(v.at("distance").get<std::size_t>());
    b.labels.push_back(label_from_json(v.at("label")));
  }
  for (const auto& e : j.at("edges")) {
    const auto label = b.edge_labels.find(e.at(2).get<std::string>());
    if (!label) throw UsageError("unknown edge label");
    const auto s = e.at(0).get<std::size_t>();
    const auto t = e.at(1).get<std::size_t>();
    if (s >= b.vertices.size() || t >= b.vertices.size()) throw UsageError("edge endpoint out of range");
    b.edges.push_back({s, t, *label});
  }
  if (b.vertices.empty()) throw UsageError("ball without vertices");
  return b;
}

Json report_to_json(const TestReport& r) {
  return Json{{"test", r.test},
              {"window", r.window},
              {"trials", r.trials},
              {"aborts", r.aborts},
              {"scans", r.scans},
              {"abort_rate", r.abort_rate()},
              {"abort_limit", r.abort_limit},
              {"statistic_name", r.statistic_name},
              {"statistic", r.statistic},
              {"threshold", r.threshold},
              {"pass", r.pass},
              {"seed_base", r.seed_base},
              {"degraded", r.degraded()}};
}

TestReport report_from_json(const Json& j) {
  TestReport r;
  r.test = j.at("test").get<std::string>();
  r.window = j.value("window", std::vector<std::string>{});
  r.trials = j.at("trials").get<std::uint64_t>();
  r.aborts = j.value("aborts", std::uint64_t{0});
  r.statistic_name = j.value("statistic_name", std::string{});
  r.statistic = j.value("statistic", 0.0);
  r.threshold = j.value("threshold", 0.0);
  r.pass = j.at("pass").get<bool>();
  r.seed_base = j.value("seed_base", std::uint64_t{0});
  r.abort_limit = j.value("abort_limit", 1e-3);
  r.scans = j.value("scans", std::uint64_t{0});
  return r;
}

namespace {

std::string outcome_cell(const SiteOutcome& o) {
  std::string s;
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(o[i]);
  }
  return s;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

void write_table_csv(std::ostream& out, const EmpiricalTable& table) {
  for (const auto& w : table.window) out << w << ',';
  out << "count,frequency\n";
  for (const auto& [o, c] : table.counts) {
    for (const auto& site : o) out << outcome_cell(site) << ',';
    out << c << ',' << fmt_double(static_cast<double>(c) / static_cast<double>(table.trials)) << '\n';
  }
}

void write_reports_csv(std::ostream& out, const std::vector<TestReport>& reports) {
  out << "test,trials,aborts,abort_rate,statistic_name,statistic,threshold,pass,degraded\n";
  for (const auto& r : reports) {
    out << r.test << ',' << r.trials << ',' << r.aborts << ',' << fmt_double(r.abort_rate()) << ','
        << r.statistic_name << ',' << fmt_double(r.statistic) << ',' << fmt_double(r.threshold) << ','
        << (r.pass ? "true" : "false") << ',' << (r.degraded() ? "true" : "false") << '\n';
  }
}

}  // namespace freeshift::io
