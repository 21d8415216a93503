#pragma once

// JSON form of a presentation and a plain-text point list.
//
//   {"source": [-3, -2, -1], "target": [-1, 0, 1],
//    "entries": [["Y*Z", "X", "0"], ...]}        one row per target twist

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sheafstrata/builders.hpp"
#include "sheafstrata/forms_io.hpp"
#include "sheafstrata/gradedmat.hpp"

namespace sheafstrata {

using Json = nlohmann::ordered_json;

inline Json to_json(const Presentation& p) {
  Json rows = Json::array();
  for (std::size_t j = 0; j < p.rows(); ++j) {
    Json row = Json::array();
    for (std::size_t i = 0; i < p.cols(); ++i) row.push_back(to_string(p(j, i)));
    rows.push_back(std::move(row));
  }
  return Json{{"source", p.source_twists()}, {"target", p.target_twists()}, {"entries", std::move(rows)}};
}

namespace detail {
inline std::vector<int> twist_list(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) throw Error(ErrorKind::parse_error, std::string("missing array '") + key + "'");
  std::vector<int> out;
  for (const auto& v : j[key]) {
    if (!v.is_number_integer()) throw Error(ErrorKind::parse_error, std::string("'") + key + "' must hold integers");
    out.push_back(v.get<int>());
  }
  return out;
}
}  // namespace detail

inline Presentation presentation_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::parse_error, "presentation must be a JSON object");
  const auto src = detail::twist_list(j, "source");
  const auto tgt = detail::twist_list(j, "target");
  if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].size() != tgt.size())
    throw Error(ErrorKind::parse_error, "'entries' must have one row per target twist");
  Presentation p(src, tgt);
  for (std::size_t r = 0; r < tgt.size(); ++r) {
    const Json& row = j["entries"][r];
    if (!row.is_array() || row.size() != src.size())
      throw Error(ErrorKind::parse_error, "entry row " + std::to_string(r) + " must have one entry per source twist");
    for (std::size_t c = 0; c < src.size(); ++c) {
      const Json& e = row[c];
      std::string text;
      if (e.is_string()) text = e.get<std::string>();
      else if (e.is_number_integer()) text = std::to_string(e.get<long long>());
      else throw Error(ErrorKind::parse_error, "entries must be strings or integers");
      const int d = p.required_degree(r, c);
      const QForm f = parse_form(text);
      if (f.is_zero()) continue;
      if (d < 0 || f.degree() != d)
        throw Error(ErrorKind::degree_mismatch, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                                                    ") must have degree " + std::to_string(d));
      p(r, c) = f;
    }
  }
  return p;
}

inline Presentation parse_presentation(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::parse_error, std::string("invalid JSON: ") + e.what());
  }
  return presentation_from_json(j);
}

// One point per line, coordinates separated by spaces, commas or colons; '#' starts a comment.
inline Point parse_point(std::string line) {
  for (char& ch : line)
    if (ch == ',' || ch == ':') ch = ' ';
  std::istringstream ss(line);
  std::vector<Rational> xs;
  std::string tok;
  while (ss >> tok) xs.push_back(parse_rational(tok));
  if (xs.size() != 3) throw Error(ErrorKind::parse_error, "a point needs three coordinates: '" + line + "'");
  return {xs[0], xs[1], xs[2]};
}

inline PointSet parse_points(std::istream& in) {
  std::vector<Point> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    pts.push_back(parse_point(line));
  }
  return PointSet(std::move(pts));
}

}  // namespace sheafstrata
