#include "qkt/kring.hpp"

#include "qkt/errors.hpp"
#include "qkt/series_json.hpp"

namespace qkt {

using nlohmann::json;

KRing KRing::create(std::vector<std::string> labels, std::vector<std::vector<std::vector<Rational>>> mult,
                    RationalMatrix pairing) {
  const std::size_t r = labels.size();
  if (r == 0) throw InvalidPresentation("rank must be positive");
  if (mult.size() != r || pairing.rows() != r || pairing.cols() != r) {
    throw InvalidPresentation("table shapes do not match rank " + std::to_string(r));
  }
  auto impl = std::make_shared<Impl>();
  impl->labels = std::move(labels);
  impl->mult.resize(r * r * r);
  for (std::size_t i = 0; i < r; ++i) {
    if (mult[i].size() != r) throw InvalidPresentation("table shapes do not match rank");
    for (std::size_t j = 0; j < r; ++j) {
      if (mult[i][j].size() != r) throw InvalidPresentation("table shapes do not match rank");
      for (std::size_t k = 0; k < r; ++k) impl->mult[(i * r + j) * r + k] = mult[i][j][k];
    }
  }
  auto m = [&](std::size_t i, std::size_t j, std::size_t k) -> const Rational& { return impl->mult[(i * r + j) * r + k]; };
  auto where = [](std::size_t a, std::size_t b, std::size_t c) {
    return " at (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
  };

  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t k = 0; k < r; ++k) {
      const Rational delta = j == k ? 1 : 0;
      if (m(0, j, k) != delta || m(j, 0, k) != delta) throw InvalidPresentation("e0 is not a unit" + where(0, j, k));
    }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < r; ++k)
        if (m(i, j, k) != m(j, i, k)) throw InvalidPresentation("multiplication is not commutative" + where(i, j, k));
  // (e_i e_j) e_k == e_i (e_j e_k), compared coefficient by coefficient.
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < r; ++l) {
          Rational lhs = 0, rhs = 0;
          for (std::size_t a = 0; a < r; ++a) {
            lhs += m(i, j, a) * m(a, k, l);
            rhs += m(j, k, a) * m(i, a, l);
          }
          if (lhs != rhs) throw InvalidPresentation("multiplication is not associative" + where(i, j, k));
        }
  if (!pairing.is_symmetric()) throw InvalidPresentation("pairing is not symmetric");
  if (!invert(pairing, impl->pairing_inverse)) throw InvalidPresentation("pairing is singular");
  // g(e_i e_j, e_k) == g(e_i, e_j e_k)
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < r; ++k) {
        Rational lhs = 0, rhs = 0;
        for (std::size_t a = 0; a < r; ++a) {
          lhs += m(i, j, a) * pairing(a, k);
          rhs += m(j, k, a) * pairing(i, a);
        }
        if (lhs != rhs) throw InvalidPresentation("pairing is not compatible with the product" + where(i, j, k));
      }
  impl->pairing = std::move(pairing);
  return KRing(std::move(impl));
}

Rational KRing::euler(const std::vector<Rational>& coords) const {
  Rational acc = 0;
  for (std::size_t k = 0; k < rank(); ++k) acc += coords[k] * pairing(k, 0);
  return acc;
}

std::vector<Rational> KRing::multiply(const std::vector<Rational>& u, const std::vector<Rational>& v) const {
  const std::size_t r = rank();
  std::vector<Rational> out(r);
  for (std::size_t i = 0; i < r; ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < r; ++j) {
      if (v[j] == 0) continue;
      const Rational uv = u[i] * v[j];
      for (std::size_t k = 0; k < r; ++k) {
        if (mult(i, j, k) != 0) out[k] += uv * mult(i, j, k);
      }
    }
  }
  return out;
}

bool operator==(const KRing& a, const KRing& b) {
  if (a.impl_ == b.impl_) return true;
  return a.impl_->labels == b.impl_->labels && a.impl_->mult == b.impl_->mult && a.impl_->pairing == b.impl_->pairing;
}

KClass::KClass(KRing ring, std::vector<Rational> coords) : ring_(std::move(ring)), coords_(std::move(coords)) {
  if (coords_.size() != ring_.rank()) {
    throw RingMismatch("class has " + std::to_string(coords_.size()) + " coordinates, ring rank is " +
                       std::to_string(ring_.rank()));
  }
}

KClass KClass::basis(const KRing& ring, std::size_t i) {
  std::vector<Rational> c(ring.rank());
  c.at(i) = 1;
  return KClass(ring, std::move(c));
}

KClass kclass_mul(const KClass& u, const KClass& v) {
  if (!(u.ring() == v.ring())) throw RingMismatch("product of classes from different rings");
  return KClass(u.ring(), u.ring().multiply(u.coords(), v.coords()));
}

Rational kclass_pair(const KClass& u, const KClass& v) {
  if (!(u.ring() == v.ring())) throw RingMismatch("pairing of classes from different rings");
  const KRing& ring = u.ring();
  Rational acc = 0;
  for (std::size_t i = 0; i < ring.rank(); ++i) {
    if (u.coords()[i] == 0) continue;
    for (std::size_t j = 0; j < ring.rank(); ++j) acc += u.coords()[i] * v.coords()[j] * ring.pairing(i, j);
  }
  return acc;
}

Rational euler_char_line_bundle(int n, int k) {
  Rational acc = 1;
  for (int i = 1; i <= n; ++i) acc *= Rational(k + i);
  acc /= Rational(factorial(static_cast<unsigned long>(n)));
  return acc;
}

KRing projective_space_kring(int n) {
  if (n < 1) throw InvalidPresentation("projective space needs n >= 1");
  const std::size_t r = static_cast<std::size_t>(n) + 1;
  std::vector<std::string> labels{"1"};
  for (int i = 1; i <= n; ++i) labels.push_back(i == 1 ? "a" : "a^" + std::to_string(i));
  std::vector mult(r, std::vector(r, std::vector<Rational>(r)));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (i + j < r) mult[i][j][i + j] = 1;
  // chi(alpha^k) = sum_m binom(k, m) (-1)^m chi(O(-m)).
  RationalMatrix g(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const long k = static_cast<long>(i + j);
      Rational chi = 0;
      for (long m = 0; m <= k; ++m) {
        Rational term = binomial(k, m) * euler_char_line_bundle(n, static_cast<int>(-m));
        chi += (m % 2 == 0) ? term : Rational(-term);
      }
      g(i, j) = chi;
    }
  return KRing::create(std::move(labels), std::move(mult), std::move(g));
}

KRing point_kring() {
  RationalMatrix g(1, 1);
  g(0, 0) = 1;
  return KRing::create({"1"}, {{{Rational(1)}}}, std::move(g));
}

json kring_to_json(const KRing& ring) {
  const std::size_t r = ring.rank();
  json mult = json::array();
  json pairing = json::array();
  for (std::size_t i = 0; i < r; ++i) {
    json row = json::array();
    json prow = json::array();
    for (std::size_t j = 0; j < r; ++j) {
      json cell = json::array();
      for (std::size_t k = 0; k < r; ++k) cell.push_back(to_string(ring.mult(i, j, k)));
      row.push_back(std::move(cell));
      prow.push_back(to_string(ring.pairing(i, j)));
    }
    mult.push_back(std::move(row));
    pairing.push_back(std::move(prow));
  }
  return {{"rank", r}, {"labels", ring.labels()}, {"mult", std::move(mult)}, {"pairing", std::move(pairing)}};
}

KRing kring_from_json(const json& j) {
  std::vector<std::string> labels;
  std::vector<std::vector<std::vector<Rational>>> mult;
  RationalMatrix pairing;
  try {
    if (!j.is_object()) throw SchemaError("ring must be an object");
    const std::size_t r = j.at("rank").get<std::size_t>();
    if (r == 0) throw SchemaError("rank must be positive");
    if (j.contains("labels")) {
      labels = j.at("labels").get<std::vector<std::string>>();
    } else {
      for (std::size_t i = 0; i < r; ++i) labels.push_back("e" + std::to_string(i));
    }
    const json& jm = j.at("mult");
    const json& jp = j.at("pairing");
    if (labels.size() != r || jm.size() != r || jp.size() != r) throw SchemaError("array lengths must equal rank");
    mult.assign(r, std::vector(r, std::vector<Rational>(r)));
    pairing = RationalMatrix(r, r);
    for (std::size_t a = 0; a < r; ++a) {
      if (jm[a].size() != r || jp[a].size() != r) throw SchemaError("array lengths must equal rank");
      for (std::size_t b = 0; b < r; ++b) {
        if (jm[a][b].size() != r) throw SchemaError("array lengths must equal rank");
        for (std::size_t c = 0; c < r; ++c) mult[a][b][c] = rational_from_json(jm[a][b][c]);
        pairing(a, b) = rational_from_json(jp[a][b]);
      }
    }
  } catch (const json::exception& e) {
    throw SchemaError(e.what());
  }
  return KRing::create(std::move(labels), std::move(mult), std::move(pairing));
}

}  // namespace qkt
