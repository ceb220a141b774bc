#include "qkt/correlators.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "qkt/combinatorics.hpp"
#include "qkt/errors.hpp"
#include "qkt/series_json.hpp"

namespace qkt {

using nlohmann::json;

Target Target::point() { return Target(Kind::point, 0, point_kring()); }

Target Target::projective(int n) { return Target(Kind::projective, n, projective_space_kring(n)); }

Target Target::custom(KRing ring) { return Target(Kind::custom, 0, std::move(ring)); }

Target Target::parse(std::string_view text) {
  if (text == "point") return point();
  if (text.starts_with("projective:")) {
    const std::string num(text.substr(11));
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != num.size() || n < 1) throw SchemaError("bad projective target '" + std::string(text) + "'");
    return projective(n);
  }
  if (text.starts_with("custom:")) {
    const std::string path(text.substr(7));
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open ring file '" + path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw SchemaError(std::string("ring file: ") + e.what());
    }
    return custom(kring_from_json(j));
  }
  throw SchemaError("unknown target '" + std::string(text) + "'");
}

Target Target::from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "point") return point();
    if (type == "projective") {
      const int n = j.at("n").get<int>();
      if (n < 1) throw SchemaError("projective target needs n >= 1");
      return projective(n);
    }
    if (type == "custom") return custom(kring_from_json(j.at("ring")));
    throw SchemaError("unknown target type '" + type + "'");
  } catch (const json::exception& e) {
    throw SchemaError(std::string("target: ") + e.what());
  }
}

json Target::to_json() const {
  switch (kind_) {
    case Kind::point: return {{"type", "point"}};
    case Kind::projective: return {{"type", "projective"}, {"n", n_}};
    case Kind::custom: return {{"type", "custom"}, {"ring", kring_to_json(ring_)}};
  }
  return {};
}

namespace {

std::string render_ints(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

bool is_zero_degree(const DegreeVector& beta) {
  return std::all_of(beta.begin(), beta.end(), [](int b) { return b == 0; });
}

}  // namespace

std::string to_string(const CorrelatorKey& k) {
  return "beta=" + render_ints(k.beta) + " insertions=" + render_ints(k.insertions);
}

std::string to_string(const DescendentKey& k) {
  return "beta=" + render_ints(k.beta) + " insertions=" + render_ints(k.insertions) + " marked=(" +
         std::to_string(k.marked_class) + "," + std::to_string(k.power) + ")";
}

CorrelatorTable::CorrelatorTable(Target target, int degree_rank)
    : target_(std::move(target)), degree_rank_(degree_rank) {
  if (degree_rank_ < 0) throw SchemaError("degree_rank must be non-negative");
}

void CorrelatorTable::normalize(DegreeVector& beta, std::vector<int>& insertions, std::size_t extra_points) const {
  if (beta.size() != static_cast<std::size_t>(degree_rank_)) {
    throw SchemaError("beta " + render_ints(beta) + " has length != degree_rank " + std::to_string(degree_rank_));
  }
  for (int b : beta) {
    if (b < 0) throw IneffectiveDegree("beta " + render_ints(beta) + " has a negative component");
  }
  for (int i : insertions) {
    if (i < 0 || static_cast<std::size_t>(i) >= ring().rank()) {
      throw SchemaError("insertion index " + std::to_string(i) + " outside the basis");
    }
  }
  std::sort(insertions.begin(), insertions.end());
  if (is_zero_degree(beta) && insertions.size() + extra_points < 3) {
    throw SchemaError("degree-zero entry with fewer than 3 marked points: " + render_ints(insertions));
  }
}

void CorrelatorTable::insert(CorrelatorKey key, Rational value) {
  normalize(key.beta, key.insertions, 0);
  const std::string desc = to_string(key);
  value.canonicalize();
  if (!plain_.try_emplace(std::move(key), std::move(value)).second) throw DuplicateEntry(desc);
}

void CorrelatorTable::insert(DescendentKey key, Rational value) {
  normalize(key.beta, key.insertions, 1);
  if (key.marked_class < 0 || static_cast<std::size_t>(key.marked_class) >= ring().rank()) {
    throw SchemaError("marked class " + std::to_string(key.marked_class) + " outside the basis");
  }
  if (key.power < 0) throw SchemaError("negative descendent power");
  const std::string desc = to_string(key);
  value.canonicalize();
  if (!desc_.try_emplace(std::move(key), std::move(value)).second) throw DuplicateEntry(desc);
}

std::optional<Rational> CorrelatorTable::find(CorrelatorKey key) const {
  std::sort(key.insertions.begin(), key.insertions.end());
  auto it = plain_.find(key);
  if (it == plain_.end()) return std::nullopt;
  return it->second;
}

std::optional<Rational> CorrelatorTable::find(DescendentKey key) const {
  std::sort(key.insertions.begin(), key.insertions.end());
  auto it = desc_.find(key);
  if (it == desc_.end()) return std::nullopt;
  return it->second;
}

CorrelatorTable CorrelatorTable::with_entry(CorrelatorKey key, Rational value) const {
  CorrelatorTable copy = *this;
  normalize(key.beta, key.insertions, 0);
  value.canonicalize();
  copy.plain_[std::move(key)] = std::move(value);
  return copy;
}

CorrelatorTable CorrelatorTable::with_entry(DescendentKey key, Rational value) const {
  CorrelatorTable copy = *this;
  normalize(key.beta, key.insertions, 1);
  value.canonicalize();
  copy.desc_[std::move(key)] = std::move(value);
  return copy;
}

bool operator==(const CorrelatorTable& a, const CorrelatorTable& b) {
  return a.ring() == b.ring() && a.degree_rank_ == b.degree_rank_ && a.plain_ == b.plain_ && a.desc_ == b.desc_;
}

namespace {

std::vector<Rational> product_class(const KRing& ring, const std::vector<int>& insertions) {
  std::vector<Rational> acc(ring.rank());
  acc[0] = 1;
  for (int i : insertions) {
    std::vector<Rational> e(ring.rank());
    e.at(static_cast<std::size_t>(i)) = 1;
    acc = ring.multiply(acc, e);
  }
  return acc;
}

}  // namespace

Rational beta_zero_correlator(const KRing& ring, const std::vector<int>& insertions) {
  if (insertions.size() < 3) {
    throw ModuliNonexistent("M_{0," + std::to_string(insertions.size()) + "} does not exist");
  }
  return ring.euler(product_class(ring, insertions));
}

Rational beta_zero_descendent(const KRing& ring, const std::vector<int>& insertions, int marked_class, int power,
                              DescendentEngine& engine) {
  const std::size_t n = insertions.size() + 1;
  if (n < 3) throw ModuliNonexistent("M_{0," + std::to_string(n) + "} does not exist");
  std::vector<int> all = insertions;
  all.push_back(marked_class);
  const Rational chi_x = ring.euler(product_class(ring, all));
  if (chi_x == 0) return 0;
  std::vector<int> exps(n, 0);
  exps.back() = power;
  return chi_x * Rational(engine.euler(DescendentIndex(std::move(exps))));
}

CorrelatorTable load_correlators(const json& document) {
  try {
    if (!document.is_object() || !document.contains("target")) throw SchemaError("document needs a 'target'");
    Target target = Target::from_json(document.at("target"));
    const int s = document.contains("degree_rank") ? document.at("degree_rank").get<int>() : target.default_degree_rank();
    CorrelatorTable table(std::move(target), s);
    if (document.contains("correlators")) {
      for (const json& e : document.at("correlators")) {
        table.insert(CorrelatorKey{e.at("beta").get<DegreeVector>(), e.at("insertions").get<std::vector<int>>()},
                     rational_from_json(e.at("value")));
      }
    }
    if (document.contains("descendent_correlators")) {
      for (const json& e : document.at("descendent_correlators")) {
        const json& marked = e.at("marked");
        table.insert(DescendentKey{e.at("beta").get<DegreeVector>(), e.at("insertions").get<std::vector<int>>(),
                                   marked.at("class").get<int>(), marked.at("power").get<int>()},
                     rational_from_json(e.at("value")));
      }
    }
    return table;
  } catch (const json::exception& e) {
    throw SchemaError(e.what());
  }
}

json correlators_to_json(const CorrelatorTable& table) {
  json plain = json::array();
  for (const auto& [k, v] : table.entries()) {
    plain.push_back({{"beta", k.beta}, {"insertions", k.insertions}, {"value", to_string(v)}});
  }
  json desc = json::array();
  for (const auto& [k, v] : table.descendent_entries()) {
    desc.push_back({{"beta", k.beta},
                    {"insertions", k.insertions},
                    {"marked", {{"class", k.marked_class}, {"power", k.power}}},
                    {"value", to_string(v)}});
  }
  return {{"target", table.target().to_json()},
          {"degree_rank", table.degree_rank()},
          {"correlators", std::move(plain)},
          {"descendent_correlators", std::move(desc)}};
}

json ConsistencyReport::to_json() const {
  json v = json::array();
  for (const auto& x : violations) {
    v.push_back({{"beta", x.beta},
                 {"insertions", x.insertions},
                 {"without_unit", qkt::to_string(x.without_unit)},
                 {"with_unit", qkt::to_string(x.with_unit)}});
  }
  return {{"pairs_checked", pairs_checked},
          {"fundamental_class_violations", std::move(v)},
          {"symmetric_group_covariance", "structural (multiset keys)"}};
}

ConsistencyReport table_consistency_check(const CorrelatorTable& table) {
  ConsistencyReport report;
  for (const auto& [key, value] : table.entries()) {
    CorrelatorKey longer = key;
    longer.insertions.insert(longer.insertions.begin(), 0);
    auto it = table.entries().find(longer);
    if (it == table.entries().end()) continue;
    ++report.pairs_checked;
    if (it->second != value) report.violations.push_back({key.beta, key.insertions, value, it->second});
  }
  return report;
}

CorrelatorTable point_descendent_table(int nmax, int dmax) {
  if (nmax < 3) throw InvalidIndex("point_descendent_table needs nmax >= 3");
  CorrelatorTable table(Target::point(), 0);
  for (int n = 3; n <= nmax; ++n) {
    const std::vector<BigInt> profile = one_descendent_profile(n, dmax);
    for (int d = 0; d <= dmax; ++d) {
      table.insert(DescendentKey{{}, std::vector<int>(static_cast<std::size_t>(n - 1), 0), 0, d},
                   Rational(profile[static_cast<std::size_t>(d)]));
    }
  }
  return table;
}

CorrelatorTable beta_zero_table(const Target& target, int nmax) {
  CorrelatorTable table(target, target.default_degree_rank());
  const DegreeVector zero(static_cast<std::size_t>(table.degree_rank()), 0);
  for (int n = 3; n <= nmax; ++n) {
    for_each_multiset(target.ring().rank(), static_cast<std::size_t>(n), [&](const std::vector<int>& ins) {
      table.insert(CorrelatorKey{zero, ins}, beta_zero_correlator(target.ring(), ins));
    });
  }
  return table;
}

}  // namespace qkt
