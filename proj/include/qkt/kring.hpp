#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "qkt/rational.hpp"

namespace qkt {

/// Finite-rank unital commutative algebra with a perfect Frobenius pairing.
/// Basis element 0 is the unit (the structure sheaf). Cheap to copy.
class KRing {
 public:
  /// mult[i][j][k] is the coefficient of e_k in e_i * e_j. Rejects tables
  /// that are not commutative, associative and unital, and pairings that are
  /// asymmetric, singular or incompatible with the product. Throws
  /// InvalidPresentation.
  static KRing create(std::vector<std::string> labels, std::vector<std::vector<std::vector<Rational>>> mult,
                      RationalMatrix pairing);

  std::size_t rank() const { return impl_->labels.size(); }
  const std::string& label(std::size_t i) const { return impl_->labels[i]; }
  const std::vector<std::string>& labels() const { return impl_->labels; }
  const Rational& mult(std::size_t i, std::size_t j, std::size_t k) const {
    return impl_->mult[(i * rank() + j) * rank() + k];
  }
  const Rational& pairing(std::size_t i, std::size_t j) const { return impl_->pairing(i, j); }
  const RationalMatrix& pairing_matrix() const { return impl_->pairing; }
  const RationalMatrix& pairing_inverse() const { return impl_->pairing_inverse; }

  /// Euler characteristic of a class given in coordinates: (u, e_0).
  Rational euler(const std::vector<Rational>& coords) const;
  /// Coordinates of the product of two classes given in coordinates.
  std::vector<Rational> multiply(const std::vector<Rational>& u, const std::vector<Rational>& v) const;

  friend bool operator==(const KRing& a, const KRing& b);

 private:
  struct Impl {
    std::vector<std::string> labels;
    std::vector<Rational> mult;
    RationalMatrix pairing;
    RationalMatrix pairing_inverse;
  };
  explicit KRing(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Element of a K-ring in basis coordinates.
class KClass {
 public:
  KClass(KRing ring, std::vector<Rational> coords);
  static KClass basis(const KRing& ring, std::size_t i);

  const KRing& ring() const { return ring_; }
  const std::vector<Rational>& coords() const { return coords_; }

  friend bool operator==(const KClass&, const KClass&) = default;

 private:
  KRing ring_;
  std::vector<Rational> coords_;
};

enum class KClassOp { mul, pair };

/// Product (as a class) or pairing (as a rational, returned in a rank-1
/// coordinate vector) of two classes. Throws RingMismatch.
KClass kclass_mul(const KClass& u, const KClass& v);
Rational kclass_pair(const KClass& u, const KClass& v);

/// chi(P^n, O(k)) = (k+1)(k+2)...(k+n)/n!, for every integer k.
Rational euler_char_line_bundle(int n, int k);

/// K(P^n) in the basis alpha^i, alpha = 1 - [O(-1)], alpha^{n+1} = 0.
KRing projective_space_kring(int n);
KRing point_kring();

/// {"rank": r, "labels": [...], "mult": [[[...]]], "pairing": [[...]]}.
nlohmann::json kring_to_json(const KRing& ring);
/// Full invariant validation; schema problems raise SchemaError.
KRing kring_from_json(const nlohmann::json& j);

}  // namespace qkt
