#pragma once

#include <json.hpp>

#include "qtrans/exp_affine.hpp"
#include "qtrans/transversality.hpp"

namespace qtrans {

using Json = nlohmann::json;

/// {"n": int, "terms": [{"alpha": [ints], "re": float, "im": float}]}
Json to_json(const HoloPoly& p);
HoloPoly holo_poly_from_json(const Json& j);

/// Adds per-term {"lambda": [[re,im],...], "c": [re,im]}.
Json to_json(const ExpAffinePoly& f);
ExpAffinePoly exp_affine_from_json(const Json& j);

/// {"grid_min":..., "slack":..., "bound":..., "witness":[...], "h":...}
Json to_json(const TransversalityCertificate& c);

Json point_to_json(const Point& z);
Point point_from_json(const Json& j);

}  // namespace qtrans
