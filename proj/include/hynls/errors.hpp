#pragma once

#include <stdexcept>
#include <string>

namespace hynls {

// A run produced non-finite samples or lost mass beyond the drift limit.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& reason, double time, double mass_drift)
      : std::runtime_error(reason + " at t = " + std::to_string(time)),
        time_(time),
        mass_drift_(mass_drift) {}
  double time() const { return time_; }
  double mass_drift() const { return mass_drift_; }

 private:
  double time_;
  double mass_drift_;
};

// Initial data not resolved: spectral tail above the guard at 2/3 Nyquist.
class ResolutionError : public std::invalid_argument {
 public:
  ResolutionError(const std::string& what, double tail_ratio)
      : std::invalid_argument(what), tail_ratio_(tail_ratio) {}
  double tail_ratio() const { return tail_ratio_; }

 private:
  double tail_ratio_;
};

// Picard differences grew for three consecutive iterates.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The localized part reached the wrap-around region of the truncated line.
class BoundaryContaminationError : public std::runtime_error {
 public:
  BoundaryContaminationError(const std::string& what, double relative_mass)
      : std::runtime_error(what), relative_mass_(relative_mass) {}
  double relative_mass() const { return relative_mass_; }

 private:
  double relative_mass_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hynls
