#pragma once

#include <json.hpp>

#include "qkt/rational.hpp"
#include "qkt/series.hpp"

namespace qkt {

/// Accepts "p/q" strings and JSON integers. Throws SchemaError otherwise.
Rational rational_from_json(const nlohmann::json& j);
nlohmann::json rational_to_json(const Rational& r);

/// {"vars": {"t": n, "Q": s, "q": 0|1}, "trunc": {"t": T, "Q": D, "q": M},
///  "terms": [{"exp": [...], "value": "p/q"}, ...]}
nlohmann::json series_to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const nlohmann::json& j);

}  // namespace qkt
