#include "hynls/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hynls {

void PropertyReport::add(double observed_value, double bound_value) {
  observed.push_back(observed_value);
  bound.push_back(bound_value);
}

void PropertyReport::finalize() {
  if (observed.size() != bound.size()) {
    throw std::logic_error("report " + name + " has mismatched observed/bound lengths");
  }
  margin = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double slack = bound[i] * (1.0 + tolerance) - observed[i];
    if (std::isnan(slack)) {
      ok = false;
      margin = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    if (!(observed[i] <= bound[i] * (1.0 + tolerance))) ok = false;
    if (!std::isnan(margin)) margin = std::min(margin, slack);
  }
  passed = ok;
}

nlohmann::json encode_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double decode_double(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("not a number: " + s);
  }
  return j.get<double>();
}

namespace {

nlohmann::json encode_vector(const std::vector<double>& v) {
  auto out = nlohmann::json::array();
  for (double x : v) out.push_back(encode_double(x));
  return out;
}

std::vector<double> decode_vector(const nlohmann::json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(decode_double(x));
  return out;
}

}  // namespace

nlohmann::json to_json(const PropertyReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["params"] = r.params;
  j["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
  j["observed"] = encode_vector(r.observed);
  j["bound"] = encode_vector(r.bound);
  j["tolerance"] = encode_double(r.tolerance);
  j["margin"] = encode_double(r.margin);
  j["passed"] = r.passed;
  j["notes"] = r.notes;
  return j;
}

PropertyReport report_from_json(const nlohmann::json& j) {
  PropertyReport r;
  r.name = j.at("name").get<std::string>();
  r.params = j.at("params").get<std::map<std::string, std::string>>();
  if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
  r.observed = decode_vector(j.at("observed"));
  r.bound = decode_vector(j.at("bound"));
  r.tolerance = decode_double(j.at("tolerance"));
  r.margin = decode_double(j.at("margin"));
  r.passed = j.at("passed").get<bool>();
  r.notes = j.at("notes").get<std::string>();
  return r;
}

}  // namespace hynls
