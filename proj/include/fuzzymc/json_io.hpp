#pragma once

#include "fuzzymc/constants.hpp"
#include "fuzzymc/coupling.hpp"
#include "fuzzymc/decomposition.hpp"
#include "fuzzymc/glued_graph.hpp"
#include "fuzzymc/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace fuzzymc {

using Json = nlohmann::json;

/// Unreadable file, malformed JSON, or a document that does not follow its schema.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Sorted keys, two-space indent, floats with 17 significant digits, and
/// non-finite numbers as the strings "inf", "-inf", "nan".
std::string dump_canonical(const Json& document);

/// Finite doubles as numbers, others as strings.
Json number_to_json(double value);
double number_from_json(const Json& value);

// {"states": [...], "pi": [...], "Q": [[...]...]}
ReversibleChain chain_from_json(const Json& document);
Json chain_to_json(const ReversibleChain& chain);

// {"vertices": [...], "edges": [[u, v]...]}; base graphs add "H": [...]
Graph graph_from_json(const Json& document);
Json graph_to_json(const Graph& graph);
BaseGraph base_graph_from_json(const Json& document);

// {"classes": [...], "membership": [[...]...]}
FuzzyPartition partition_from_json(const Json& document);
Json partition_to_json(const FuzzyPartition& partition);

// {"pairs": [{"i": id, "j": id, "support": [[x, y, mass]...]}...]}
CouplingSet couplings_from_json(const Json& document, const ReversibleChain& chain,
                                const FuzzyPartition& partition);
Json couplings_to_json(const CouplingSet& couplings, const ReversibleChain& chain,
                       const FuzzyPartition& partition);

Json violations_to_json(const ValidationReport& report, const std::vector<std::string>& row_names = {},
                        const std::vector<std::string>& col_names = {});

Json decomposed_to_json(const DecomposedSystem& system, const FuzzyPartition& partition);

Json ratio_estimate_to_json(const RatioEstimate& estimate);
Json constants_report_to_json(const ConstantsReport& report);

Json verdict_to_json(const BoundVerdict& verdict);
Json full_report_to_json(const FullReport& report, const ReversibleChain& chain,
                         const FuzzyPartition& partition);

}  // namespace fuzzymc
