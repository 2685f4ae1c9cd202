#pragma once

#include "counterexamples.hpp"
#include "sketch.hpp"

#include <json.hpp>

namespace fwlab {

using nlohmann::json;

/// Exact numbers are "p/q" strings; readers also accept JSON numbers.
json to_json(const Rational& q);
Rational rational_from_json(const json& j);
/// Full-precision decimal string.
json to_json(const Real& x);
Real real_from_json(const json& j);

json to_json(const QVec2& p);
QVec2 qvec_from_json(const json& j);

/// {"vertices": [[x, y], ...]} in counter-clockwise order.
json to_json(const QPolygon& P);
QPolygon polygon_from_json(const json& j);

json to_json(const SketchSpec& spec);
SketchSpec sketch_from_json(const json& j);

json to_json(const ValidationReport& r);

/// Exact point with a float mirror: {"exact": ["p/q", "p/q"], "float": [x, y]}.
json mirrored(const QVec2& p);

/// Instance summary: constraint set, start, strategy, thresholds, strips and
/// sketch (when present).
json to_json(const Instance& inst);

}  // namespace fwlab
