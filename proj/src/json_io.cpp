#include "fuzzymc/json_io.hpp"

#include <limits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fuzzymc {

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

namespace {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void dump(const Json& node, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent), ' ');
  switch (node.type()) {
    case Json::value_t::object: {
      if (node.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = node.begin(); it != node.end(); ++it) {  // std::map: sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump(it.value(), indent + 2, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (node.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(node.begin(), node.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t k = 0; k < node.size(); ++k) {
          if (k > 0) out += ", ";
          dump(node[k], indent + 2, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < node.size(); ++k) {
        if (k > 0) out += ",\n";
        out += pad;
        dump(node[k], indent + 2, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = node.get<double>();
      out += std::isfinite(v) ? format_double(v) : Json(std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")).dump();
      return;
    }
    default:
      out += node.dump();
      return;
  }
}

std::vector<std::string> string_list(const Json& node, const char* what) {
  if (!node.is_array()) throw InputError(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : node) {
    if (!e.is_string()) throw InputError(std::string(what) + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

const Json& require_key(const Json& document, const char* key) {
  if (!document.is_object() || !document.contains(key)) {
    throw InputError(std::string("missing key \"") + key + "\"");
  }
  return document.at(key);
}

Vector vector_from_json(const Json& node, const char* what) {
  if (!node.is_array()) throw InputError(std::string(what) + " must be an array of numbers");
  Vector v(static_cast<Index>(node.size()));
  for (std::size_t k = 0; k < node.size(); ++k) v(static_cast<Index>(k)) = number_from_json(node[k]);
  return v;
}

Matrix matrix_from_json(const Json& node, const char* what) {
  if (!node.is_array()) throw InputError(std::string(what) + " must be an array of rows");
  const auto rows = static_cast<Index>(node.size());
  const Index cols = rows == 0 ? 0 : static_cast<Index>(node[0].is_array() ? node[0].size() : 0);
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = node[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw InputError(std::string(what) + " rows must be arrays of equal length");
    }
    for (Index c = 0; c < cols; ++c) m(r, c) = number_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(number_to_json(v(k)));
  return out;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

Json names_to_json(const std::vector<std::string>& names) { return Json(names); }

}  // namespace

std::string dump_canonical(const Json& document) {
  std::string out;
  dump(document, 0, out);
  out += "\n";
  return out;
}

Json number_to_json(double value) {
  if (std::isfinite(value)) return value;
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

double number_from_json(const Json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InputError("expected a number");
}

ReversibleChain chain_from_json(const Json& document) {
  try {
    return ReversibleChain(string_list(require_key(document, "states"), "states"),
                           vector_from_json(require_key(document, "pi"), "pi"),
                           matrix_from_json(require_key(document, "Q"), "Q"));
  } catch (const StructuralError& e) {
    throw InputError(e.what());
  }
}

Json chain_to_json(const ReversibleChain& chain) {
  return Json{{"states", names_to_json(chain.states())},
              {"pi", vector_to_json(chain.pi())},
              {"Q", matrix_to_json(chain.generator())}};
}

Graph graph_from_json(const Json& document) {
  Graph g;
  g.vertices = string_list(require_key(document, "vertices"), "vertices");
  const auto& edges = require_key(document, "edges");
  if (!edges.is_array()) throw InputError("edges must be an array of pairs");
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
      throw InputError("each edge must be a pair of vertex names");
    }
    try {
      g.edges.emplace_back(g.vertex_index(e[0].get<std::string>()), g.vertex_index(e[1].get<std::string>()));
    } catch (const StructuralError& err) {
      throw InputError(err.what());
    }
  }
  return g;
}

Json graph_to_json(const Graph& graph) {
  Json edges = Json::array();
  for (const auto& [u, v] : graph.edges) {
    edges.push_back({graph.vertices[static_cast<std::size_t>(u)], graph.vertices[static_cast<std::size_t>(v)]});
  }
  return Json{{"vertices", names_to_json(graph.vertices)}, {"edges", edges}};
}

BaseGraph base_graph_from_json(const Json& document) {
  BaseGraph base{graph_from_json(document), {}};
  if (document.contains("H")) {
    for (const auto& name : string_list(document.at("H"), "H")) {
      try {
        base.glued.push_back(base.graph.vertex_index(name));
      } catch (const StructuralError& err) {
        throw InputError(err.what());
      }
    }
  }
  return base;
}

FuzzyPartition partition_from_json(const Json& document) {
  auto classes = string_list(require_key(document, "classes"), "classes");
  Matrix membership = matrix_from_json(require_key(document, "membership"), "membership");
  if (membership.rows() == 0) membership.resize(0, static_cast<Index>(classes.size()));
  try {
    return FuzzyPartition(std::move(classes), std::move(membership));
  } catch (const StructuralError& e) {
    throw InputError(e.what());
  }
}

Json partition_to_json(const FuzzyPartition& partition) {
  return Json{{"classes", names_to_json(partition.classes())},
              {"membership", matrix_to_json(partition.membership())}};
}

CouplingSet couplings_from_json(const Json& document, const ReversibleChain& chain,
                                const FuzzyPartition& partition) {
  const auto& pairs = require_key(document, "pairs");
  if (!pairs.is_array()) throw InputError("pairs must be an array");
  CouplingSet out;
  try {
    for (const auto& entry : pairs) {
      const auto& i = require_key(entry, "i");
      const auto& j = require_key(entry, "j");
      if (!i.is_string() || !j.is_string()) throw InputError("coupling class ids must be strings");
      Coupling c{partition.class_index(i.get<std::string>()), partition.class_index(j.get<std::string>()), {}};
      const auto& support = require_key(entry, "support");
      if (!support.is_array()) throw InputError("support must be an array of [x, y, mass]");
      for (const auto& atom : support) {
        if (!atom.is_array() || atom.size() != 3 || !atom[0].is_string() || !atom[1].is_string()) {
          throw InputError("support entries must be [stateId, stateId, mass]");
        }
        c.support.push_back({chain.state_index(atom[0].get<std::string>()),
                             chain.state_index(atom[1].get<std::string>()), number_from_json(atom[2])});
      }
      out.add(std::move(c));
    }
  } catch (const StructuralError& e) {
    throw InputError(e.what());
  }
  return out;
}

Json couplings_to_json(const CouplingSet& couplings, const ReversibleChain& chain,
                       const FuzzyPartition& partition) {
  Json pairs = Json::array();
  for (const auto& c : couplings.couplings()) {
    Json support = Json::array();
    for (const auto& atom : c.support) {
      support.push_back({chain.states()[static_cast<std::size_t>(atom.x)],
                         chain.states()[static_cast<std::size_t>(atom.y)], number_to_json(atom.mass)});
    }
    pairs.push_back({{"i", partition.classes()[static_cast<std::size_t>(c.i)]},
                     {"j", partition.classes()[static_cast<std::size_t>(c.j)]},
                     {"support", support}});
  }
  return Json{{"pairs", pairs}};
}

Json violations_to_json(const ValidationReport& report, const std::vector<std::string>& row_names,
                        const std::vector<std::string>& col_names) {
  Json out = Json::array();
  for (const auto& v : report) {
    Json entry{{"invariant", v.invariant}, {"magnitude", number_to_json(v.magnitude)},
               {"count", v.count}, {"detail", v.detail}};
    auto name = [](const std::vector<std::string>& names, Index k) -> Json {
      if (k < 0) return nullptr;
      if (static_cast<std::size_t>(k) < names.size()) return names[static_cast<std::size_t>(k)];
      return k;
    };
    entry["row"] = name(row_names, v.row);
    entry["col"] = name(col_names, v.col);
    out.push_back(std::move(entry));
  }
  return out;
}

Json decomposed_to_json(const DecomposedSystem& system, const FuzzyPartition& partition) {
  Json restrictions = Json::array();
  for (const auto& r : system.restrictions) {
    restrictions.push_back({{"class", partition.classes()[static_cast<std::size_t>(r.class_index)]},
                            {"chain", chain_to_json(r.chain)}});
  }
  return Json{{"classes", names_to_json(partition.classes())},
              {"pi_hat", vector_to_json(system.pi_hat)},
              {"projection", chain_to_json(system.projection)},
              {"restrictions", restrictions}};
}

Json ratio_estimate_to_json(const RatioEstimate& estimate) {
  return Json{{"kind", std::string(to_string(estimate.kind))},
              {"value", number_to_json(estimate.value)},
              {"upper_bound", true},
              {"method", "multi-start finite-difference descent on f = exp(g)"},
              {"restarts", estimate.restarts},
              {"valid_restarts", estimate.valid_restarts},
              {"best_restart", estimate.best_restart},
              {"iterations", estimate.iterations},
              {"seed", estimate.seed},
              {"minimizer", vector_to_json(estimate.minimizer)}};
}

Json constants_report_to_json(const ConstantsReport& report) {
  return Json{{"lambda", number_to_json(report.lambda)},
              {"alpha_est", ratio_estimate_to_json(report.alpha_est)},
              {"rho_est", ratio_estimate_to_json(report.rho_est)},
              {"warnings", report.warnings}};
}

Json verdict_to_json(const BoundVerdict& verdict) {
  Json classes = Json::object();
  for (const auto& c : verdict.class_constants) classes[c.class_id] = number_to_json(c.value);
  return Json{{"kind", std::string(to_string(verdict.kind))},
              {"lhs", number_to_json(verdict.lhs)},
              {"rhs", number_to_json(verdict.rhs)},
              {"chi", number_to_json(verdict.chi)},
              {"projection_constant", number_to_json(verdict.projection_constant)},
              {"projection_term", number_to_json(verdict.projection_term)},
              {"class_constants", classes},
              {"tolerance", verdict.tolerance},
              {"tolerance_mode", verdict.relative_tolerance ? "relative" : "absolute"},
              {"advisory", verdict.advisory},
              {"pass", verdict.pass},
              {"slack", number_to_json(verdict.slack)},
              {"notes", verdict.notes}};
}

Json full_report_to_json(const FullReport& report, const ReversibleChain& chain,
                         const FuzzyPartition& partition) {
  Json couplings = Json::object();
  for (const auto& [key, violations] : report.coupling_violations) {
    couplings[key] = violations_to_json(violations, chain.states(), chain.states());
  }
  Json validation{{"chain", violations_to_json(report.chain_violations, chain.states(), chain.states())},
                  {"partition", violations_to_json(report.partition_violations, chain.states(),
                                                   partition.classes())},
                  {"couplings", couplings},
                  {"valid", report.valid()}};

  Json identities = Json::object();
  auto identity_json = [](const IdentityCheck& c) {
    return Json{{"max_residual", number_to_json(c.max_residual)},
                {"max_mean_gap", number_to_json(c.max_mean_gap)},
                {"trials", c.trials},
                {"tolerance", kIdentityTolerance},
                {"pass", c.pass}};
  };
  if (report.variance) identities["variance_decomposition"] = identity_json(*report.variance);
  if (report.entropy) identities["entropy_decomposition"] = identity_json(*report.entropy);
  Json dirichlet = Json::object();
  for (const auto& d : report.dirichlet) {
    dirichlet[std::string(to_string(d.kind))] = {{"min_slack", number_to_json(d.min_slack)},
                                                 {"trials", d.trials},
                                                 {"tolerance", kDirichletSlackTolerance},
                                                 {"pass", d.pass}};
  }
  if (!report.dirichlet.empty()) identities["dirichlet_inequality"] = dirichlet;

  Json verdicts = Json::array();
  for (const auto& v : report.verdicts) verdicts.push_back(verdict_to_json(v));

  Json out{{"validation", validation},
           {"identities", identities},
           {"chi", number_to_json(report.chi)},
           {"verdicts", verdicts},
           {"warnings", report.warnings}};
  if (report.system) out["decomposition"] = decomposed_to_json(*report.system, partition);
  return out;
}

}  // namespace fuzzymc
