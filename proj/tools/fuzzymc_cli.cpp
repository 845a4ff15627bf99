#include "fuzzymc/chain.hpp"
#include "fuzzymc/constants.hpp"
#include "fuzzymc/coupling.hpp"
#include "fuzzymc/decomposition.hpp"
#include "fuzzymc/glued_graph.hpp"
#include "fuzzymc/json_io.hpp"
#include "fuzzymc/semigroup.hpp"
#include "fuzzymc/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace fuzzymc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSemantic = 1;
constexpr int kExitInput = 2;

// Exit 1 with a message; the instance was readable but fails a semantic check.
class SemanticFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string chain_path;
  std::string graph_path;
  std::string partition_path;
  std::string couplings_path;
  std::string base_path;
  std::string out_path;
  std::uint64_t seed = 0;
  int restarts = 32;
  int max_iter = 2000;
  int trials = 200;
  double tol = kPoincareVerdictTolerance;
  unsigned threads = 1;
  bool product_couplings = false;
  bool symmetric_completion = false;
  double eps = 0.25;
  double t_max = 10.0;
  double step = 0.01;
};

void emit(const RunConfig& config, const std::string& text) {
  if (config.out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(config.out_path, text);
  }
}

ReversibleChain load_chain(const RunConfig& config) {
  if (!config.chain_path.empty()) return chain_from_json(read_json_file(config.chain_path));
  if (!config.graph_path.empty()) {
    const Graph graph = graph_from_json(read_json_file(config.graph_path));
    try {
      return random_walk_chain(graph);
    } catch (const StructuralError& e) {
      throw InputError(e.what());
    }
  }
  throw InputError("a chain is required: pass --chain or --graph");
}

FuzzyPartition load_partition(const RunConfig& config, const ReversibleChain& chain) {
  if (config.partition_path.empty()) throw InputError("--partition is required");
  auto partition = partition_from_json(read_json_file(config.partition_path));
  if (partition.state_count() != chain.size()) {
    throw InputError("partition rows do not match the chain's state count");
  }
  return partition;
}

RatioOptions ratio_options(const RunConfig& config) {
  RatioOptions options;
  options.seed = config.seed;
  options.restarts = config.restarts;
  options.max_iter = config.max_iter;
  options.threads = config.threads;
  return options;
}

std::string summarize(const ValidationReport& report) {
  std::ostringstream out;
  for (const auto& v : report) out << v.invariant << " (" << v.detail << ", magnitude " << v.magnitude << "); ";
  return out.str();
}

int cmd_validate(const RunConfig& config) {
  const auto chain = load_chain(config);
  Json out{{"chain", violations_to_json(validate_chain(chain), chain.states(), chain.states())}};
  bool ok = validate_chain(chain).empty();
  if (!config.partition_path.empty()) {
    const auto partition = load_partition(config, chain);
    const auto report = validate_partition(partition, chain.size());
    out["partition"] = violations_to_json(report, chain.states(), partition.classes());
    ok = ok && report.empty();
    if (!config.couplings_path.empty()) {
      if (!report.empty()) throw SemanticFailure("couplings cannot be checked against an invalid partition");
      const auto couplings = couplings_from_json(read_json_file(config.couplings_path), chain, partition);
      const auto system = decompose(chain, partition);
      Json per_pair = Json::object();
      for (const auto& c : couplings.couplings()) {
        const auto violations = validate_coupling(c, system.embedded_measure(c.i, chain.size()),
                                                  system.embedded_measure(c.j, chain.size()));
        ok = ok && violations.empty();
        per_pair[partition.classes()[static_cast<std::size_t>(c.i)] + "->" +
                 partition.classes()[static_cast<std::size_t>(c.j)]] =
            violations_to_json(violations, chain.states(), chain.states());
      }
      out["couplings"] = per_pair;
    }
  }
  out["valid"] = ok;
  emit(config, dump_canonical(out));
  return ok ? kExitOk : kExitSemantic;
}

int cmd_decompose(const RunConfig& config) {
  const auto chain = load_chain(config);
  const auto partition = load_partition(config, chain);
  const auto report = validate_partition(partition, chain.size());
  if (!report.empty()) throw SemanticFailure("invalid partition: " + summarize(report));
  emit(config, dump_canonical(decomposed_to_json(decompose(chain, partition), partition)));
  return kExitOk;
}

int cmd_constants(const RunConfig& config) {
  const auto chain = load_chain(config);
  const auto report = validate_chain(chain);
  if (!report.empty()) throw SemanticFailure("invalid chain: " + summarize(report));
  emit(config, dump_canonical(constants_report_to_json(estimate_constants(chain, ratio_options(config)))));
  return kExitOk;
}

int cmd_bound(const RunConfig& config) {
  const auto chain = load_chain(config);
  const auto partition = load_partition(config, chain);
  const auto chain_report = validate_chain(chain);
  if (!chain_report.empty()) throw SemanticFailure("invalid chain: " + summarize(chain_report));
  const auto partition_report = validate_partition(partition, chain.size());
  if (!partition_report.empty()) throw SemanticFailure("invalid partition: " + summarize(partition_report));

  CouplingSet couplings;
  if (!config.couplings_path.empty()) {
    couplings = couplings_from_json(read_json_file(config.couplings_path), chain, partition);
  }
  if (config.symmetric_completion) couplings = symmetric_completion(couplings);
  if (config.product_couplings) {
    const auto system = decompose(chain, partition);
    for (const auto& [i, j] : active_pairs(system)) {
      if (couplings.find(i, j) == nullptr) {
        couplings.add(product_coupling(i, j, system.embedded_measure(i, chain.size()),
                                       system.embedded_measure(j, chain.size())));
      }
    }
  }

  VerifyOptions options;
  options.trials = config.trials;
  options.seed = config.seed;
  options.ratio = ratio_options(config);
  options.threads = config.threads;
  options.poincare_tolerance = config.tol;
  FullReport report;
  try {
    report = full_report(chain, partition, couplings, options);
  } catch (const MissingCouplingError& e) {
    throw SemanticFailure(std::string(e.what()) + " (supply --couplings or pass --product-couplings)");
  }
  emit(config, dump_canonical(full_report_to_json(report, chain, partition)));
  return report.poincare_passes() ? kExitOk : kExitSemantic;
}

int cmd_glued(const RunConfig& config) {
  if (config.base_path.empty()) throw InputError("--base is required");
  const BaseGraph base = base_graph_from_json(read_json_file(config.base_path));
  GluedInstance instance = [&] {
    try {
      return build_glued_graph(base);
    } catch (const DomainError& e) {
      throw SemanticFailure(e.what());
    } catch (const StructuralError& e) {
      throw SemanticFailure(e.what());
    }
  }();
  const auto partition = canonical_partition(instance.glued);
  const auto couplings = canonical_coupling(instance.glued, instance.chain);
  const auto closed = closed_form_quantities(base);
  const auto system = decompose(instance.chain, partition);
  const double q12 = system.q_hat()(0, 1);
  const double q21 = system.q_hat()(1, 0);
  const double chi = quality_chi(instance.chain, partition, system, couplings).value;
  const double lambda_hat = poincare_constant(system.projection);
  const double bound = chi_times(chi, lambda_hat);

  Json quantities{
      {"closed_form",
       {{"q_hat_12", closed.q_hat_12}, {"chi", number_to_json(closed.chi)}, {"projection_bound", closed.projection_bound}}},
      {"definition",
       {{"q_hat_12", q12}, {"q_hat_21", q21}, {"chi", number_to_json(chi)}, {"lambda_q_hat", lambda_hat},
        {"projection_bound", number_to_json(bound)}}},
      {"difference",
       {{"q_hat_12", std::abs(q12 - closed.q_hat_12)},
        {"chi", number_to_json(std::abs(chi - closed.chi))},
        {"projection_bound", number_to_json(std::abs(bound - closed.projection_bound))}}},
      {"graph", graph_to_json(instance.glued.graph)}};

  const Json chain_json = chain_to_json(instance.chain);
  const Json partition_json = partition_to_json(partition);
  const Json couplings_json = couplings_to_json(couplings, instance.chain, partition);
  if (config.out_path.empty()) {
    std::cout << dump_canonical(Json{{"chain", chain_json},
                                     {"partition", partition_json},
                                     {"couplings", couplings_json},
                                     {"quantities", quantities}});
  } else {
    const fs::path dir(config.out_path);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory " + dir.string());
    write_text_file(dir / "chain.json", dump_canonical(chain_json));
    write_text_file(dir / "partition.json", dump_canonical(partition_json));
    write_text_file(dir / "couplings.json", dump_canonical(couplings_json));
    write_text_file(dir / "closed_form.json", dump_canonical(quantities));
  }
  return kExitOk;
}

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

int cmd_mixing(const RunConfig& config) {
  const auto chain = load_chain(config);
  const auto report = validate_chain(chain);
  if (!report.empty()) throw SemanticFailure("invalid chain: " + summarize(report));
  MixingScan scan;
  try {
    scan = tv_mixing_time(chain, config.eps, config.t_max, config.step);
  } catch (const DomainError& e) {
    throw SemanticFailure(e.what());
  }
  std::ostringstream csv;
  csv << "t,max_tv\n";
  for (std::size_t k = 0; k < scan.times.size(); ++k) {
    csv << format_number(scan.times[k]) << "," << format_number(scan.max_tv[k]) << "\n";
  }
  const double lambda = poincare_constant(chain);
  const double pi_min = chain.pi().minCoeff();
  csv << "# lambda=" << format_number(lambda);
  if (scan.bracket) {
    const double ratio = *scan.bracket * lambda / std::log(1.0 / (config.eps * pi_min));
    csv << " diagnostic_ratio=" << format_number(ratio)
        << " (t_bracket*lambda/log(1/(eps*pi_min)), not asserted)";
  }
  csv << "\n";
  if (scan.bracket) {
    csv << "# t_mix_bracket=" << format_number(*scan.bracket) << " eps=" << format_number(config.eps)
        << " step=" << format_number(config.step) << " (first grid point with max TV <= eps)\n";
  } else {
    csv << "# t_mix_bracket=not reached eps=" << format_number(config.eps)
        << " t_max=" << format_number(config.t_max) << "\n";
  }
  emit(config, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy decomposition of finite reversible Markov chains"};
  app.require_subcommand(1);
  RunConfig config;

  auto add_common = [&config](CLI::App* sub) {
    sub->add_option("--chain", config.chain_path, "chain JSON {states, pi, Q}");
    sub->add_option("--graph", config.graph_path, "graph JSON {vertices, edges}; uses its simple random walk");
    sub->add_option("--out", config.out_path, "output file (directory for glued)");
    sub->add_option("--seed", config.seed, "random seed");
    sub->add_option("--restarts", config.restarts, "descent restarts for MLSI/LSI estimates")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", config.max_iter, "descent iterations per restart")->check(CLI::PositiveNumber);
    sub->add_option("--threads", config.threads, "worker threads (results do not depend on it)");
  };
  auto add_instance = [&config](CLI::App* sub) {
    sub->add_option("--partition", config.partition_path, "partition JSON {classes, membership}");
    sub->add_option("--couplings", config.couplings_path, "couplings JSON {pairs}");
  };

  auto* validate = app.add_subcommand("validate", "check chain, partition and coupling invariants");
  add_common(validate);
  add_instance(validate);
  auto* decompose_cmd = app.add_subcommand("decompose", "emit the projection and restriction chains");
  add_common(decompose_cmd);
  add_instance(decompose_cmd);
  auto* constants = app.add_subcommand("constants", "Poincare constant and MLSI/LSI estimates");
  add_common(constants);
  auto* bound = app.add_subcommand("bound", "verify the decomposition bounds for an instance");
  add_common(bound);
  add_instance(bound);
  bound->add_option("--tol", config.tol, "absolute tolerance of the Poincare verdict")->check(CLI::PositiveNumber);
  bound->add_option("--trials", config.trials, "random functions per identity check")->check(CLI::NonNegativeNumber);
  bound->add_flag("--product-couplings", config.product_couplings, "synthesize product couplings for missing pairs");
  bound->add_flag("--symmetric-completion", config.symmetric_completion, "derive kappa_ji by transposing kappa_ij");
  auto* glued = app.add_subcommand("glued", "build the glued double graph instance from a base graph");
  add_common(glued);
  glued->add_option("--base", config.base_path, "base graph JSON {vertices, edges, H}")->required();
  auto* mixing = app.add_subcommand("mixing", "total-variation mixing curve as CSV");
  add_common(mixing);
  mixing->add_option("--eps", config.eps, "TV threshold in (0,1)");
  mixing->add_option("--t-max", config.t_max, "last time on the grid");
  mixing->add_option("--step", config.step, "grid spacing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*validate) return cmd_validate(config);
    if (*decompose_cmd) return cmd_decompose(config);
    if (*constants) return cmd_constants(config);
    if (*bound) return cmd_bound(config);
    if (*glued) return cmd_glued(config);
    if (*mixing) return cmd_mixing(config);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SemanticFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  }
  return kExitInput;
}
