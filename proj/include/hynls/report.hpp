#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hynls {

// Outcome of one inequality or identity check. For inequality checks
// passed == (observed[i] <= bound[i] * (1 + tolerance) for every i), and
// margin is the smallest bound[i] * (1 + tolerance) - observed[i].
struct PropertyReport {
  std::string name;
  std::map<std::string, std::string> params;
  std::optional<std::uint64_t> seed;
  std::vector<double> observed;
  std::vector<double> bound;
  double tolerance = 0.0;
  double margin = 0.0;
  bool passed = false;
  std::string notes;

  template <class T>
  void set_param(const std::string& key, const T& value) {
    if constexpr (std::is_convertible_v<T, std::string>) {
      params[key] = value;
    } else {
      params[key] = nlohmann::json(value).dump();
    }
  }

  // Appends one observed/bound pair.
  void add(double observed_value, double bound_value);
  // Recomputes margin and passed from observed, bound and tolerance.
  void finalize();
};

nlohmann::json to_json(const PropertyReport& report);
PropertyReport report_from_json(const nlohmann::json& j);

// Non-finite doubles are stored as the strings "inf", "-inf" and "nan".
nlohmann::json encode_double(double x);
double decode_double(const nlohmann::json& j);

}  // namespace hynls
