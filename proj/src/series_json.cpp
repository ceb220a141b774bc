#include "qkt/series_json.hpp"

#include "qkt/errors.hpp"

namespace qkt {

using nlohmann::json;

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return Rational(std::to_string(j.get<unsigned long long>()));
  throw SchemaError("expected a rational string or integer, got " + j.dump());
}

json rational_to_json(const Rational& r) { return to_string(r); }

namespace {

int get_int(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_boolean()) return v.get<bool>() ? 1 : 0;
  if (!v.is_number_integer()) throw SchemaError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace

json series_to_json(const TruncatedSeries& s) {
  const VariableSet& v = s.vars();
  json terms = json::array();
  for (const auto& t : s.terms()) {
    terms.push_back({{"exp", t.monomial.exponents(v.size())}, {"value", to_string(t.coeff)}});
  }
  return {
      {"vars", {{"t", v.t_count}, {"Q", v.novikov_count}, {"q", v.has_q ? 1 : 0}}},
      {"trunc", {{"t", s.truncation().t}, {"Q", s.truncation().novikov}, {"q", s.truncation().q}}},
      {"terms", std::move(terms)},
  };
}

TruncatedSeries series_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("vars") || !j.contains("trunc") || !j.contains("terms")) {
      throw SchemaError("series needs 'vars', 'trunc' and 'terms'");
    }
    const json& jv = j.at("vars");
    const json& jt = j.at("trunc");
    VariableSet vars{get_int(jv, "t", 0), get_int(jv, "Q", 0), get_int(jv, "q", 0) != 0};
    Truncation trunc{get_int(jt, "t", 0), get_int(jt, "Q", 0), get_int(jt, "q", 0)};
    std::vector<std::pair<std::vector<int>, Rational>> terms;
    for (const json& term : j.at("terms")) {
      auto exps = term.at("exp").get<std::vector<int>>();
      for (int e : exps) {
        if (e < 0) throw SchemaError("negative exponent in series term");
      }
      terms.emplace_back(std::move(exps), rational_from_json(term.at("value")));
    }
    return TruncatedSeries::from_terms(vars, trunc, std::move(terms));
  } catch (const json::exception& e) {
    throw SchemaError(e.what());
  } catch (const IncompatibleSeries& e) {
    throw SchemaError(e.what());
  }
}

}  // namespace qkt
