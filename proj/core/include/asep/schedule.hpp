#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "asep/params.hpp"

namespace asep {

/// Reservoir rates (alpha, beta, gamma, delta): alpha injects and gamma removes
/// at the left end, delta injects and beta removes at the right end.
struct Rates {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;

  friend bool operator==(const Rates&, const Rates&) = default;
};

/// Right-continuous piecewise-constant function of macroscopic time.
///
/// breakpoints[0] == 0 and breakpoints are strictly increasing; values[j]
/// holds on [breakpoints[j], breakpoints[j+1]), the last value on
/// [breakpoints.back(), inf).
template <class Value>
class PiecewiseConstant {
 public:
  PiecewiseConstant() = default;

  explicit PiecewiseConstant(Value constant) : breakpoints_{0.0}, values_{constant} {}

  PiecewiseConstant(std::vector<double> breakpoints, std::vector<Value> values)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.empty() || breakpoints_.size() != values_.size())
      throw ParameterError("schedule: breakpoints and values must be non-empty and of equal length");
    if (breakpoints_.front() != 0.0)
      throw ParameterError("schedule: first breakpoint must be 0");
    for (std::size_t j = 1; j < breakpoints_.size(); ++j) {
      if (!(breakpoints_[j] > breakpoints_[j - 1]) || !std::isfinite(breakpoints_[j]))
        throw ParameterError("schedule: breakpoints must be finite and strictly increasing");
    }
  }

  const Value& at(double t) const {
    std::size_t lo = 0;
    std::size_t hi = breakpoints_.size();
    // last breakpoint <= t
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (breakpoints_[mid] <= t)
        lo = mid;
      else
        hi = mid;
    }
    return values_[lo];
  }

  /// First breakpoint strictly after t, if any.
  std::optional<double> next_breakpoint(double t) const {
    for (double b : breakpoints_)
      if (b > t) return b;
    return std::nullopt;
  }

  bool is_constant() const { return values_.size() == 1; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<Value>& values() const { return values_; }

 private:
  std::vector<double> breakpoints_{0.0};
  std::vector<Value> values_{Value{}};
};

/// Piecewise-constant reservoir rates; every rate finite and >= 0.
class RateSchedule : public PiecewiseConstant<Rates> {
 public:
  RateSchedule() = default;
  explicit RateSchedule(Rates constant);
  RateSchedule(std::vector<double> breakpoints, std::vector<Rates> values);
};

/// Piecewise-constant boundary datum with values in [0, 1].
class ScalarSchedule : public PiecewiseConstant<double> {
 public:
  ScalarSchedule() = default;
  explicit ScalarSchedule(double constant);
  ScalarSchedule(std::vector<double> breakpoints, std::vector<double> values);
};

inline Rates schedule_eval(const RateSchedule& s, double t) { return s.at(t); }

}  // namespace asep
