#pragma once

#include <nlohmann/json.hpp>

#include "normkam/cylinder_map.hpp"
#include "normkam/series.hpp"

namespace normkam {

// {"freq": [...], "order_max": N, "cutoff": K,
//  "coeffs": [{"k": int, "j": [ints], "re": float, "im": float}, ...]}
// with coeffs sorted by (k, lexicographic j). Round trips are bit-exact.
nlohmann::json series_to_json(const Series& s);
// Throws ParseError on malformed documents, InvalidEntry/InvalidFrequency as make_series.
Series series_from_json(const nlohmann::json& doc);

// {"gamma0": float, "f": series, "g": series}
nlohmann::json map_to_json(const ReversibleCylinderMap& m);
ReversibleCylinderMap map_from_json(const nlohmann::json& doc);

// {"u": series, "v": series}
nlohmann::json transform_to_json(const NearIdentityTransform& t);

}  // namespace normkam
