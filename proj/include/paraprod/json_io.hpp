#pragma once

// JSON forms:
//   StepFunction {"depth": D, "leaves": [[re, im], ...]}
//   Symbol       {"depth": D, "entries": [{"path": "01", "re": x, "im": y}, ...]}
//   TreeWeight   {"depth": D, "entries": [{"path": "01", "value": v}, ...]}
// Symbols and weights list nonzero entries only, in tree order.

#include <json.hpp>

#include <stdexcept>
#include <string>

#include "paraprod/haar_space.hpp"
#include "paraprod/symbol.hpp"

namespace paraprod {

using Json = nlohmann::ordered_json;

inline Json to_json(const StepFunction& f) {
  Json leaves = Json::array();
  for (const auto& v : f.leaves()) leaves.push_back({v.real(), v.imag()});
  return {{"depth", f.depth()}, {"leaves", leaves}};
}

inline StepFunction step_function_from_json(const Json& j) {
  const int depth = j.at("depth").get<int>();
  std::vector<Complex> leaves;
  for (const auto& cell : j.at("leaves")) {
    if (!cell.is_array() || cell.size() != 2) {
      throw std::invalid_argument("StepFunction JSON: each leaf must be [re, im]");
    }
    leaves.emplace_back(cell[0].get<double>(), cell[1].get<double>());
  }
  return StepFunction(depth, std::move(leaves));
}

inline Json to_json(const Symbol& a) {
  Json entries = Json::array();
  for (NodeId id = 0; id < a.size(); ++id) {
    if (a[id] == Complex{}) continue;
    entries.push_back({{"path", DyadicIndex::from_id(id).path()}, {"re", a[id].real()}, {"im", a[id].imag()}});
  }
  return {{"depth", a.depth()}, {"entries", entries}};
}

inline Symbol symbol_from_json(const Json& j) {
  Symbol a(j.at("depth").get<int>());
  for (const auto& e : j.at("entries")) {
    const double re = e.value("re", 0.0);
    const double im = e.value("im", 0.0);
    a.set(e.at("path").get<std::string>(), Complex(re, im));
  }
  return a;
}

inline Json to_json(const TreeWeight& w) {
  Json entries = Json::array();
  for (NodeId id = 0; id < w.size(); ++id) {
    if (w[id] == 0.0) continue;
    entries.push_back({{"path", DyadicIndex::from_id(id).path()}, {"value", w[id]}});
  }
  return {{"depth", w.depth()}, {"entries", entries}};
}

inline TreeWeight tree_weight_from_json(const Json& j) {
  TreeWeight w(j.at("depth").get<int>());
  for (const auto& e : j.at("entries")) {
    w.set(e.at("path").get<std::string>(), e.at("value").get<double>());
  }
  return w;
}

}  // namespace paraprod
