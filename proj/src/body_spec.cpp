#include <string>

#include "json.hpp"
#include "polyint/bodies.hpp"
#include "polyint/error.hpp"

namespace polyint {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::InvalidSpec, "body spec: " + what); }

double number(const json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

Vec vector_of(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) bad(std::string(what) + " must be a non-empty array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = number(j[i], what);
  return v;
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

Vec center_or_zero(const json& j, Eigen::Index n) {
  auto it = j.find("center");
  if (it == j.end()) return Vec::Zero(n);
  Vec c = vector_of(*it, "center");
  if (c.size() != n) bad("center has the wrong length");
  return c;
}

BodySpec parse(const json& j, int depth) {
  if (depth > 32) bad("translate nesting is too deep");
  if (!j.is_object()) bad("expected an object");
  const json& type = field(j, "type");
  if (!type.is_string()) bad("'type' must be a string");
  const std::string t = type.get<std::string>();
  if (t == "ellipsoid") {
    const json& rows = field(j, "shape");
    if (!rows.is_array() || rows.empty()) bad("shape must be a non-empty matrix");
    const auto n = static_cast<Eigen::Index>(rows.size());
    Mat a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec r = vector_of(rows[i], "shape row");
      if (r.size() != n) bad("shape must be square");
      a.row(i) = r.transpose();
    }
    return {EllipsoidSpec{a, center_or_zero(j, n)}};
  }
  if (t == "lp_ball") {
    LpBallSpec s;
    s.p = number(field(j, "p"), "p");
    s.semi_axes = vector_of(field(j, "semi_axes"), "semi_axes");
    s.center = center_or_zero(j, s.semi_axes.size());
    return {s};
  }
  if (t == "polytope") {
    const json& hs = field(j, "halfspaces");
    if (!hs.is_array() || hs.empty()) bad("halfspaces must be a non-empty array");
    Eigen::Index n = -1;
    PolytopeSpec s;
    s.offsets.resize(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) {
      if (!hs[i].is_object()) bad("halfspace must be an object");
      const Vec a = vector_of(field(hs[i], "normal"), "normal");
      if (n < 0) {
        n = a.size();
        s.normals.resize(hs.size(), n);
      }
      if (a.size() != n) bad("normals have inconsistent lengths");
      s.normals.row(i) = a.transpose();
      s.offsets[i] = number(field(hs[i], "offset"), "offset");
    }
    return {s};
  }
  if (t == "translate") {
    TranslateSpec s;
    s.inner = std::make_shared<const BodySpec>(parse(field(j, "inner"), depth + 1));
    s.shift = vector_of(field(j, "shift"), "shift");
    return {s};
  }
  bad("unknown type '" + t + "'");
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(const BodySpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        json j;
        if constexpr (std::is_same_v<T, EllipsoidSpec>) {
          j["type"] = "ellipsoid";
          json rows = json::array();
          for (Eigen::Index i = 0; i < s.shape.rows(); ++i) rows.push_back(vec_json(s.shape.row(i).transpose()));
          j["shape"] = rows;
          j["center"] = vec_json(s.center);
        } else if constexpr (std::is_same_v<T, LpBallSpec>) {
          j["type"] = "lp_ball";
          j["p"] = s.p;
          j["semi_axes"] = vec_json(s.semi_axes);
          j["center"] = vec_json(s.center);
        } else if constexpr (std::is_same_v<T, PolytopeSpec>) {
          j["type"] = "polytope";
          json hs = json::array();
          for (Eigen::Index i = 0; i < s.normals.rows(); ++i)
            hs.push_back({{"normal", vec_json(s.normals.row(i).transpose())}, {"offset", s.offsets[i]}});
          j["halfspaces"] = hs;
        } else {
          j["type"] = "translate";
          j["inner"] = to_json(*s.inner);
          j["shift"] = vec_json(s.shift);
        }
        return j;
      },
      spec.kind);
}

}  // namespace

BodySpec parse_body_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  return parse(j, 0);
}

std::string body_spec_to_json(const BodySpec& spec) { return to_json(spec).dump(); }

BodySpec flatten(const BodySpec& spec) {
  const auto* tr = std::get_if<TranslateSpec>(&spec.kind);
  if (!tr) return spec;
  if (!tr->inner) bad("translate without inner body");
  BodySpec inner = flatten(*tr->inner);
  const Vec& s = tr->shift;
  auto same = [&](Eigen::Index n) {
    if (s.size() != n || !s.allFinite()) bad("shift has the wrong length");
  };
  if (auto* e = std::get_if<EllipsoidSpec>(&inner.kind)) {
    same(e->center.size());
    e->center += s;
  } else if (auto* l = std::get_if<LpBallSpec>(&inner.kind)) {
    same(l->center.size());
    l->center += s;
  } else {
    auto& p = std::get<PolytopeSpec>(inner.kind);
    same(p.normals.cols());
    p.offsets += p.normals * s;
  }
  return inner;
}

}  // namespace polyint
