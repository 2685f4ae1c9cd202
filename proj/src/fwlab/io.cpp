#include "io.hpp"

#include <sstream>

namespace fwlab {

json to_json(const Rational& q) { return rational_to_string(q); }

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number()) return parse_rational(j.dump());
  throw Error("expected a number or a \"p/q\" string");
}

json to_json(const Real& x) {
  std::ostringstream os;
  os.precision(std::numeric_limits<Real>::max_digits10);
  os << x;
  return os.str();
}

Real real_from_json(const json& j) {
  if (j.is_number()) return Real(j.get<double>());
  if (!j.is_string()) throw Error("expected a number or a decimal string");
  try {
    return Real(j.get<std::string>());
  } catch (const std::exception&) {
    throw Error("malformed decimal " + j.get<std::string>());
  }
}

json to_json(const QVec2& p) { return json::array({to_json(p.x), to_json(p.y)}); }

QVec2 qvec_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("expected a point [x, y]");
  return {rational_from_json(j[0]), rational_from_json(j[1])};
}

json to_json(const QPolygon& P) {
  json v = json::array();
  for (const auto& p : P.vertices()) v.push_back(to_json(p));
  return {{"vertices", v}};
}

QPolygon polygon_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array()) throw Error("polygon needs \"vertices\"");
  std::vector<QVec2> pts;
  for (const auto& p : j["vertices"]) pts.push_back(qvec_from_json(p));
  return QPolygon::hull(pts);
}

json to_json(const SketchSpec& spec) {
  json j;
  j["polytopes"] = json::array();
  for (const auto& P : spec.polytopes) j["polytopes"].push_back(to_json(P));
  j["marks"] = json::array();
  for (const auto& m : spec.marks)
    j["marks"].push_back({{"k", m.k},
                          {"level", m.level},
                          {"vertex", to_json(m.vertex)},
                          {"direction", {to_json(m.direction.x), to_json(m.direction.y)}}});
  j["margins"] = json::array();
  for (const auto& d : spec.margins) j["margins"].push_back(to_json(d));
  j["domain"] = to_json(spec.domain);
  return j;
}

SketchSpec sketch_from_json(const json& j) {
  try {
    SketchSpec s;
    for (const auto& P : j.at("polytopes")) s.polytopes.push_back(polygon_from_json(P));
    for (const auto& m : j.at("marks")) {
      const auto& d = m.at("direction");
      if (!d.is_array() || d.size() != 2) throw Error("direction must be [x, y]");
      s.marks.push_back({m.at("k").get<std::size_t>(), m.at("level").get<std::size_t>(), qvec_from_json(m.at("vertex")),
                         {real_from_json(d[0]), real_from_json(d[1])}});
    }
    for (const auto& d : j.at("margins")) s.margins.push_back(rational_from_json(d));
    s.domain = polygon_from_json(j.at("domain"));
    return s;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed sketch: ") + e.what());
  }
}

json to_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e{{"hypothesis", c.hypothesis}, {"pass", c.pass}};
    if (!c.pass) e["witness"] = c.witness;
    checks.push_back(e);
  }
  return {{"pass", r.pass()}, {"checks", checks}};
}

json mirrored(const QVec2& p) {
  return {{"exact", to_json(p)}, {"float", {to_double(p.x), to_double(p.y)}}};
}

json to_json(const Instance& inst) {
  json j;
  j["instance"] = inst.name;
  j["adversarial"] = inst.adversarial;
  j["C"] = to_json(inst.C);
  j["strategy"] = to_string(inst.strategy);
  j["x0"] = mirrored(inst.x0);
  j["solution_set"] = to_json(inst.solution_set);
  j["depth"] = inst.depth;
  if (inst.id == InstanceId::Ce3) j["K"] = inst.K;
  j["expected"] = {{"epsilon", to_double(inst.expected.epsilon)},
                   {"window", inst.expected.window},
                   {"band_half_width", to_double(inst.expected.band_half_width)},
                   {"min_band_crossings", inst.expected.min_band_crossings},
                   {"displacement_threshold", to_double(inst.expected.displacement_threshold)},
                   {"min_displacements", inst.expected.min_displacements}};
  if (!inst.strips.empty()) {
    j["strips"] = json::array();
    for (const auto& s : inst.strips)
      j["strips"].push_back({{"k", s.k},
                             {"E", to_json(s.E)},
                             {"F", to_json(s.F)},
                             {"I", to_json(s.I)},
                             {"J", to_json(s.J)},
                             {"H", to_json(s.H)},
                             {"G", to_json(s.G)}});
  }
  if (inst.policy.mode == LmoPolicy::Mode::Scripted) j["script_length"] = inst.policy.script.size();
  if (inst.spec) j["sketch"] = to_json(*inst.spec);
  return j;
}

}  // namespace fwlab
