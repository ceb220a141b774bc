#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qkt/correlators.hpp"
#include "qkt/descendents.hpp"
#include "qkt/errors.hpp"
#include "qkt/frobenius.hpp"
#include "qkt/qde.hpp"
#include "qkt/random.hpp"
#include "qkt/series_json.hpp"

namespace {

using nlohmann::json;
using namespace qkt;

enum Exit : int { kOk = 0, kError = 1, kNotReducible = 2, kNonzero = 3 };

struct RunConfig {
  std::string target = "point";
  int t_order = 6;
  int q_order = 0;
  int desc_order = 4;
  std::string input;
  std::string output;
  std::uint64_t seed = 20240611;
  int count = 50;
  std::string exponents;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void emit(const RunConfig& cfg, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw UsageError("cannot write '" + cfg.output + "'");
  out << text;
}

void require_orders(const RunConfig& cfg, int min_t) {
  if (cfg.t_order < min_t) throw UsageError("--t-order must be at least " + std::to_string(min_t));
  if (cfg.q_order < 0 || cfg.desc_order < 0) throw UsageError("orders must be non-negative");
}

/// The table from --input, or an empty table over --target whose degree-zero
/// entries are generated on demand.
CorrelatorTable load_table(const RunConfig& cfg) {
  if (!cfg.input.empty()) return load_correlators(read_json_file(cfg.input));
  const Target target = Target::parse(cfg.target);
  return CorrelatorTable(target, target.default_degree_rank());
}

std::vector<int> parse_exponents(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw UsageError("malformed exponent '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty exponent list");
  return out;
}

int cmd_descendent(const RunConfig& cfg) {
  std::vector<std::vector<int>> batch;
  const bool batch_mode = !cfg.input.empty();
  if (batch_mode) {
    const json doc = read_json_file(cfg.input);
    try {
      batch = doc.get<std::vector<std::vector<int>>>();
    } catch (const json::exception& e) {
      throw SchemaError(std::string("batch file must be an array of integer arrays: ") + e.what());
    }
  } else {
    if (cfg.exponents.empty()) throw UsageError("give an exponent list such as 2,3,0,1 or --input");
    batch.push_back(parse_exponents(cfg.exponents));
  }

  // Validate everything before printing anything.
  std::vector<DescendentIndex> indices;
  for (const auto& e : batch) indices.emplace_back(e);

  std::ostringstream out;
  bool any_unreducible = false;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    std::optional<BigInt> value;
    try {
      value = descendent_euler(indices[k]);
    } catch (const NotReducible& e) {
      any_unreducible = true;
      if (!batch_mode) std::cerr << e.what() << "\n";
    }
    if (batch_mode) {
      json line = {{"index", batch[k]}};
      if (value) line["value"] = value->get_str();
      else line["error"] = "NotReducible";
      out << line.dump() << "\n";
    } else if (value) {
      out << value->get_str() << "\n";
    }
  }
  if (cfg.output.empty()) std::cout << out.str();
  else {
    std::ofstream f(cfg.output);
    if (!f) throw UsageError("cannot write '" + cfg.output + "'");
    f << out.str();
  }
  return any_unreducible ? kNotReducible : kOk;
}

int cmd_potential(const RunConfig& cfg) {
  require_orders(cfg, 3);
  const Potential p = assemble_potential(load_table(cfg), cfg.t_order, cfg.q_order);
  emit(cfg, series_to_json(p.G));
  std::cerr << "potential: " << p.G.terms().size() << " terms, t-order " << cfg.t_order << ", Q-order "
            << cfg.q_order << "\n";
  return kOk;
}

int cmd_frobenius(const RunConfig& cfg) {
  require_orders(cfg, 3);
  const FrobeniusData fd = build_frobenius(assemble_potential(load_table(cfg), cfg.t_order, cfg.q_order));
  const FrobeniusReport rep = frobenius_check(fd);
  emit(cfg, rep.to_json(fd.vars()));
  std::cerr << "frobenius-check: certified t <= " << rep.certified.t << ", Q <= " << rep.certified.novikov << ": "
            << (rep.all_zero() ? "all residuals zero" : "NONZERO residuals") << "\n";
  return rep.all_zero() ? kOk : kNonzero;
}

int cmd_qde(const RunConfig& cfg) {
  require_orders(cfg, 1);
  const CorrelatorTable table = load_table(cfg);
  // The product tensor loses three t-orders; build it two orders higher so
  // the window is limited by S alone.
  const FrobeniusData fd = build_frobenius(assemble_potential(table, cfg.t_order + 2, cfg.q_order));
  const QDESolution sol = assemble_fundamental_solution(table, cfg.t_order, cfg.q_order, cfg.desc_order);
  const QDEReport rep = qde_residual(sol, fd);
  emit(cfg, rep.to_json(sol.S.vars()));
  std::cerr << "qde-check: window t <= " << rep.window.t << ", Q <= " << rep.window.novikov << ", q <= " << rep.window.q
            << ": " << (rep.all_zero() ? "all residuals zero" : "NONZERO residuals")
            << (rep.complete ? "" : ", solution not complete") << "\n";
  return rep.all_zero() ? kOk : kNonzero;
}

int cmd_table(const RunConfig& cfg) {
  CorrelatorTable table = cfg.input.empty() ? beta_zero_table(Target::parse(cfg.target), cfg.t_order)
                                            : load_correlators(read_json_file(cfg.input));
  const ConsistencyReport rep = table_consistency_check(table);
  json doc = rep.to_json();
  doc["entries"] = table.entries().size();
  doc["descendent_entries"] = table.descendent_entries().size();
  emit(cfg, doc);
  std::cerr << "table-check: " << rep.pairs_checked << " pairs, " << rep.violations.size() << " violations\n";
  return rep.violations.empty() ? kOk : kNonzero;
}

int cmd_kring_info(const RunConfig& cfg) {
  const Target target = Target::parse(cfg.target);
  const KRing& ring = target.ring();
  json doc = kring_to_json(ring);
  json inv = json::array();
  for (std::size_t i = 0; i < ring.rank(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < ring.rank(); ++j) row.push_back(to_string(ring.pairing_inverse()(i, j)));
    inv.push_back(std::move(row));
  }
  doc["pairing_inverse"] = std::move(inv);
  emit(cfg, doc);
  std::cerr << "kring: rank " << ring.rank() << "\n";
  return kOk;
}

int cmd_inverse(const RunConfig& cfg) {
  if (cfg.count < 0) throw UsageError("--count must be non-negative");
  require_orders(cfg, 0);
  std::mt19937_64 rng(cfg.seed);
  const VariableSet vars{2, 1, false};
  const Truncation tr{cfg.t_order, cfg.q_order, 0};
  std::size_t agree = 0;
  json failures = json::array();
  for (int k = 0; k < cfg.count; ++k) {
    const std::size_t dim = 1 + static_cast<std::size_t>(k % 3);
    const SeriesMatrix G = random_perturbed_metric(rng, dim, vars, tr);
    if (matrix_inverse_geometric(G) == matrix_inverse_direct(G)) ++agree;
    else failures.push_back(k);
  }
  emit(cfg, {{"seed", cfg.seed}, {"count", cfg.count}, {"agree", agree}, {"failures", std::move(failures)}});
  std::cerr << "inverse-check: " << agree << "/" << cfg.count << " agree\n";
  return agree == static_cast<std::size_t>(cfg.count) ? kOk : kNonzero;
}

void add_common(CLI::App* cmd, RunConfig& cfg, bool orders) {
  cmd->add_option("--target", cfg.target, "point | projective:n | custom:path");
  cmd->add_option("--input", cfg.input, "Correlator table JSON (overrides --target)");
  cmd->add_option("--output", cfg.output, "Write the JSON report here instead of stdout");
  if (orders) {
    cmd->add_option("--t-order", cfg.t_order, "Truncation order T in t");
    cmd->add_option("--q-order", cfg.q_order, "Truncation order D in the Novikov variables");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact genus-zero quantum K-theory checks"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* desc = app.add_subcommand("descendent", "Euler characteristics of cotangent line bundles on M_{0,n}");
  desc->add_option("exponents", cfg.exponents, "Comma-separated exponents, e.g. 2,3,0,1");
  desc->add_option("--input", cfg.input, "JSON array of exponent arrays");
  desc->add_option("--output", cfg.output, "Write results here instead of stdout");

  auto* pot = app.add_subcommand("potential", "Assemble the genus-zero potential");
  add_common(pot, cfg, true);
  auto* frob = app.add_subcommand("frobenius-check", "WDVV, flatness, Levi-Civita, unit and Q=0 checks");
  add_common(frob, cfg, true);
  auto* qde = app.add_subcommand("qde-check", "Quantum differential equation for the fundamental solution");
  add_common(qde, cfg, true);
  qde->add_option("--desc-order", cfg.desc_order, "Truncation order M in q");
  auto* table = app.add_subcommand("table-check", "Fundamental-class consistency of a correlator table");
  add_common(table, cfg, true);
  auto* kring = app.add_subcommand("kring", "K-ring presentations");
  kring->require_subcommand(1);
  auto* info = kring->add_subcommand("info", "Print the ring of --target");
  info->add_option("--target", cfg.target, "point | projective:n | custom:path");
  info->add_option("--output", cfg.output, "Write the JSON here instead of stdout");
  auto* inverse = app.add_subcommand("inverse-check", "Compare the two metric inverses on random metrics");
  inverse->add_option("--seed", cfg.seed, "Random seed");
  inverse->add_option("--count", cfg.count, "Number of random metrics");
  inverse->add_option("--t-order", cfg.t_order, "Truncation order in t");
  inverse->add_option("--q-order", cfg.q_order, "Truncation order in Q");
  inverse->add_option("--output", cfg.output, "Write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (desc->parsed()) return cmd_descendent(cfg);
    if (pot->parsed()) return cmd_potential(cfg);
    if (frob->parsed()) return cmd_frobenius(cfg);
    if (qde->parsed()) return cmd_qde(cfg);
    if (table->parsed()) return cmd_table(cfg);
    if (info->parsed()) return cmd_kring_info(cfg);
    if (inverse->parsed()) return cmd_inverse(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const qkt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kError;
}
