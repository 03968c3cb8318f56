#include "qpencil_cli/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qpencil/errors.hpp"

namespace qpencil::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "non-finite number");
  return v;
}

cplx complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return number(j, where);
  if (j.is_array() && j.size() == 2) return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
  fail(where, "expected a number or a [re, im] pair");
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return obj.at(key);
}

CoefficientMeasure parse_measure(const json& j, const std::string& where, bool is_signed) {
  if (!j.is_object()) fail(where, "expected an object with 'atoms' and 'pieces'");
  for (const auto& [key, value] : j.items()) {
    if (key != "atoms" && key != "pieces") fail(where, "unknown field '" + key + "'");
  }
  std::vector<Atom<double>> atoms;
  std::vector<Piece<double>> pieces;
  if (j.contains("atoms")) {
    const auto& arr = j.at("atoms");
    if (!arr.is_array()) fail(where + ".atoms", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string w = where + ".atoms[" + std::to_string(i) + "]";
      if (!arr[i].is_array() || arr[i].size() != 2) fail(w, "expected [position, mass]");
      atoms.push_back({number(arr[i][0], w + "[0]"), number(arr[i][1], w + "[1]")});
      if (!is_signed && atoms.back().mass < 0.0) {
        std::ostringstream msg;
        msg << "negative mass " << atoms.back().mass << " at x = " << atoms.back().position;
        fail(w, msg.str());
      }
    }
  }
  if (j.contains("pieces")) {
    const auto& arr = j.at("pieces");
    if (!arr.is_array()) fail(where + ".pieces", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string w = where + ".pieces[" + std::to_string(i) + "]";
      if (!arr[i].is_array() || arr[i].size() != 3) fail(w, "expected [left, right, density]");
      pieces.push_back(
          {number(arr[i][0], w + "[0]"), number(arr[i][1], w + "[1]"), number(arr[i][2], w + "[2]")});
      if (!is_signed && pieces.back().density < 0.0) fail(w, "negative density");
    }
  }
  try {
    return CoefficientMeasure(std::move(atoms), std::move(pieces), is_signed);
  } catch (const ValidationError& e) {
    fail(where, e.what());
  }
}

Geometry parse_geometry(const json& j) {
  if (!j.is_object() || j.size() != 1) {
    fail("geometry", "expected exactly one of 'whole_line', 'half_line', 'bounded'");
  }
  const auto& [kind, body] = *j.items().begin();
  if (kind == "whole_line") return WholeLine{};
  if (kind == "half_line") {
    HalfLine h;
    h.c = number(member(body, "c", "geometry.half_line"), "geometry.half_line.c");
    h.gamma = body.contains("gamma") ? number(body.at("gamma"), "geometry.half_line.gamma") : 0.0;
    const auto& side = member(body, "side", "geometry.half_line");
    const std::string s = side.is_string() ? side.get<std::string>() : "";
    if (s == "+" || s == "plus") {
      h.side = Side::plus;
    } else if (s == "-" || s == "minus") {
      h.side = Side::minus;
    } else {
      fail("geometry.half_line.side", "expected \"+\" or \"-\"");
    }
    try {
      validate(h);
    } catch (const ValidationError& e) {
      fail("geometry.half_line", e.what());
    }
    return h;
  }
  if (kind == "bounded") {
    Bounded b;
    b.a = number(member(body, "a", "geometry.bounded"), "geometry.bounded.a");
    b.b = number(member(body, "b", "geometry.bounded"), "geometry.bounded.b");
    b.alpha = body.contains("alpha") ? number(body.at("alpha"), "geometry.bounded.alpha") : 0.0;
    b.beta = body.contains("beta") ? number(body.at("beta"), "geometry.bounded.beta") : 0.0;
    try {
      validate(b);
    } catch (const ValidationError& e) {
      fail("geometry.bounded", e.what());
    }
    return b;
  }
  fail("geometry", "unknown kind '" + kind + "'");
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json emit_measure(const CoefficientMeasure& m) {
  json out = json::object();
  out["atoms"] = json::array();
  out["pieces"] = json::array();
  for (const auto& a : m.atoms()) out["atoms"].push_back({a.position, a.mass});
  for (const auto& p : m.pieces()) out["pieces"].push_back({p.left, p.right, p.density});
  return out;
}

}  // namespace

Problem parse_problem_text(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) fail("problem", "expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "geometry" && key != "omega" && key != "upsilon") {
      fail("problem", "unknown field '" + key + "'");
    }
  }
  Geometry g = parse_geometry(member(j, "geometry", "problem"));
  auto omega = j.contains("omega") ? parse_measure(j.at("omega"), "omega", true) : CoefficientMeasure{};
  auto upsilon = j.contains("upsilon") ? parse_measure(j.at("upsilon"), "upsilon", false)
                                       : CoefficientMeasure({}, {}, false);
  return {Coefficients(std::move(omega), std::move(upsilon)), g};
}

Problem parse_problem(const std::string& path) { return parse_problem_text(read_file(path)); }

std::string emit_problem(const Problem& problem) {
  json j;
  if (std::holds_alternative<WholeLine>(problem.geometry)) {
    j["geometry"]["whole_line"] = json::object();
  } else if (const auto* h = std::get_if<HalfLine>(&problem.geometry)) {
    j["geometry"]["half_line"] = {
        {"c", h->c}, {"side", h->side == Side::plus ? "+" : "-"}, {"gamma", h->gamma}};
  } else {
    const auto& b = std::get<Bounded>(problem.geometry);
    j["geometry"]["bounded"] = {{"a", b.a}, {"b", b.b}, {"alpha", b.alpha}, {"beta", b.beta}};
  }
  j["omega"] = emit_measure(problem.coeffs.omega());
  j["upsilon"] = emit_measure(problem.coeffs.upsilon());
  return j.dump(2);
}

HilbertElement parse_element_text(const std::string& text) {
  const json j = parse_json(text);
  const auto& nodes = member(j, "nodes", "element");
  const auto& values = member(j, "values", "element");
  if (!nodes.is_array() || !values.is_array() || nodes.size() != values.size()) {
    fail("element", "'nodes' and 'values' must be arrays of equal length");
  }
  std::vector<double> xs;
  std::vector<cplx> vs;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    xs.push_back(number(nodes[i], "element.nodes[" + std::to_string(i) + "]"));
    vs.push_back(complex_value(values[i], "element.values[" + std::to_string(i) + "]"));
  }
  std::vector<std::pair<double, cplx>> second;
  if (j.contains("second")) {
    const auto& arr = j.at("second");
    if (!arr.is_array()) fail("element.second", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string w = "element.second[" + std::to_string(i) + "]";
      if (!arr[i].is_array() || arr[i].size() != 2) fail(w, "expected [position, value]");
      second.emplace_back(number(arr[i][0], w + "[0]"), complex_value(arr[i][1], w + "[1]"));
    }
  }
  try {
    return HilbertElement(std::move(xs), std::move(vs), std::move(second));
  } catch (const ValidationError& e) {
    fail("element", e.what());
  }
}

HilbertElement parse_element(const std::string& path) { return parse_element_text(read_file(path)); }

}  // namespace qpencil::cli
