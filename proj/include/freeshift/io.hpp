#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "freeshift/config.hpp"
#include "freeshift/free_group.hpp"
#include "freeshift/labels.hpp"
#include "freeshift/network.hpp"
#include "freeshift/statcheck.hpp"

// JSON and CSV encodings shared by the command line tool and tests.
namespace freeshift::io {

using Json = nlohmann::ordered_json;

/// ["a", "b'", "a"]; [] is the identity.
Json word_to_json(const Word& w, const GeneratorSet& gens);
Word word_from_json(const Json& j, const GeneratorSet& gens);

/// Symbol -> 3, pair -> [1, 2], run label -> [[1, 2], [3, 1]].
Json label_to_json(const VertexLabel& l);
SymbolPair pair_from_json(const Json& j);
RunLabel run_from_json(const Json& j);

/// {"kind": "pair" | "plain", "law": [...]}
Json measure_to_json(const MeasureSpec& m);
MeasureSpec measure_from_json(const Json& j);

/// {"radius", "root", "vertices": [{"word", "index", "label"}], "edges":
/// [[src, dst, "label"]], "edge_labels", "vertex_generators"}.
Json ball_to_json(const FiniteBall& b);
FiniteBall ball_from_json(const Json& j);

Json report_to_json(const TestReport& r);
TestReport report_from_json(const Json& j);

/// One row per outcome: outcome columns (one per window site), count,
/// frequency.
void write_table_csv(std::ostream& out, const EmpiricalTable& table);
/// Summary rows for a set of reports.
void write_reports_csv(std::ostream& out, const std::vector<TestReport>& reports);

}  // namespace freeshift::io
