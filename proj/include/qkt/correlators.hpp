#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qkt/descendents.hpp"
#include "qkt/kring.hpp"
#include "qkt/rational.hpp"

namespace qkt {

/// Target variety: the point, P^n, or a user-supplied K-ring presentation.
class Target {
 public:
  enum class Kind { point, projective, custom };

  static Target point();
  static Target projective(int n);
  static Target custom(KRing ring);
  /// "point", "projective:n" or "custom:path" (the file holds a ring JSON).
  static Target parse(std::string_view text);
  static Target from_json(const nlohmann::json& j);

  Kind kind() const { return kind_; }
  int n() const { return n_; }
  const KRing& ring() const { return ring_; }
  /// Rank of the effective-class basis used when none is given.
  int default_degree_rank() const { return kind_ == Kind::point ? 0 : 1; }
  nlohmann::json to_json() const;

 private:
  Target(Kind kind, int n, KRing ring) : kind_(kind), n_(n), ring_(std::move(ring)) {}
  Kind kind_;
  int n_;
  KRing ring_;
};

using DegreeVector = std::vector<int>;

struct CorrelatorKey {
  DegreeVector beta;
  std::vector<int> insertions;  // sorted basis indices
  friend auto operator<=>(const CorrelatorKey&, const CorrelatorKey&) = default;
};

/// Plain insertions plus one marked insertion tau_power(e_marked_class).
struct DescendentKey {
  DegreeVector beta;
  std::vector<int> insertions;  // sorted basis indices
  int marked_class = 0;
  int power = 0;
  friend auto operator<=>(const DescendentKey&, const DescendentKey&) = default;
};

std::string to_string(const CorrelatorKey& k);
std::string to_string(const DescendentKey& k);

/// Genus-zero correlators of one target, keyed by multisets so that the
/// symmetric-group covariance holds structurally. Absent keys are unknown.
class CorrelatorTable {
 public:
  CorrelatorTable(Target target, int degree_rank);

  const Target& target() const { return target_; }
  const KRing& ring() const { return target_.ring(); }
  int degree_rank() const { return degree_rank_; }

  /// Sorts the insertions and validates the key. Throws IneffectiveDegree,
  /// SchemaError (wrong lengths, unknown classes, beta = 0 with n < 3) or
  /// DuplicateEntry.
  void insert(CorrelatorKey key, Rational value);
  void insert(DescendentKey key, Rational value);

  std::optional<Rational> find(CorrelatorKey key) const;
  std::optional<Rational> find(DescendentKey key) const;

  /// Copy with one value replaced or added.
  CorrelatorTable with_entry(CorrelatorKey key, Rational value) const;
  CorrelatorTable with_entry(DescendentKey key, Rational value) const;

  const std::map<CorrelatorKey, Rational>& entries() const { return plain_; }
  const std::map<DescendentKey, Rational>& descendent_entries() const { return desc_; }

  friend bool operator==(const CorrelatorTable& a, const CorrelatorTable& b);

 private:
  void normalize(DegreeVector& beta, std::vector<int>& insertions, std::size_t extra_points) const;

  Target target_;
  int degree_rank_;
  std::map<CorrelatorKey, Rational> plain_;
  std::map<DescendentKey, Rational> desc_;
};

/// Degree-zero invariant chi(X, prod e_i): the moduli factor chi(M_{0,n}, O) is 1.
/// Throws ModuliNonexistent for fewer than three insertions.
Rational beta_zero_correlator(const KRing& ring, const std::vector<int>& insertions);

/// Degree-zero invariant with one marked insertion tau_power(e_marked):
/// E(n; 0, ..., 0, power) * chi(X, prod e_i * e_marked), n = insertions + 1.
Rational beta_zero_descendent(const KRing& ring, const std::vector<int>& insertions, int marked_class, int power,
                              DescendentEngine& engine = default_descendent_engine());

/// Schema documented in the README. Throws SchemaError, DuplicateEntry or
/// IneffectiveDegree.
CorrelatorTable load_correlators(const nlohmann::json& document);
nlohmann::json correlators_to_json(const CorrelatorTable& table);

struct ConsistencyViolation {
  DegreeVector beta;
  std::vector<int> insertions;  // the shorter key
  Rational without_unit;
  Rational with_unit;
};

struct ConsistencyReport {
  std::size_t pairs_checked = 0;
  std::vector<ConsistencyViolation> violations;
  nlohmann::json to_json() const;
};

/// Compares every pair of plain entries related by one extra e_0 insertion.
ConsistencyReport table_consistency_check(const CorrelatorTable& table);

/// Entries <e_0, ..., e_0, tau_d(e_0)>_{0,n,0} for 3 <= n <= nmax, d <= dmax.
CorrelatorTable point_descendent_table(int nmax, int dmax);

/// Every degree-zero plain entry with 3 <= n <= nmax insertions.
CorrelatorTable beta_zero_table(const Target& target, int nmax);

}  // namespace qkt
