#include "fraclie/report.hpp"

#include <cmath>

namespace fraclie {

using nlohmann::json;

namespace {

/// JSON has no NaN or infinity; such values are reported as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const GridSpec& g) {
  return {{"x0", g.x0}, {"x1", g.x1}, {"nx", g.nx}, {"t0", g.t0}, {"t1", g.t1}, {"nt", g.nt}};
}

json to_json(const ResidualReport& r, double tolerance) {
  json comps = json::array();
  for (const auto& c : r.components) comps.push_back({{"name", c.name}, {"max", number(c.max)}, {"rms", number(c.rms)}});
  const double m = r.max();
  return {{"check", r.check},
          {"subject", r.subject},
          {"path", path_name(r.path)},
          {"tolerance", tolerance},
          {"max", number(m)},
          {"pass", std::isfinite(m) && m <= tolerance},
          {"components", comps},
          {"grid", to_json(r.grid)},
          {"parameters", r.parameters}};
}

json to_json(const Note& n) {
  json values = json::object();
  for (const auto& [k, v] : n.values) values[k] = number(v);
  return {{"id", n.id}, {"text", n.text}, {"values", values}};
}

json report_header(const std::string& command) {
  return {{"schema", kReportSchema}, {"command", command}, {"status", "pass"}};
}

}  // namespace fraclie
