#include "asep/schedule.hpp"

namespace asep {
namespace {

void check_rates(const Rates& r) {
  for (double v : {r.alpha, r.beta, r.gamma, r.delta})
    if (!std::isfinite(v) || v < 0.0)
      throw ParameterError("schedule: reservoir rates must be finite and >= 0");
}

void check_unit(double v) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0)
    throw ParameterError("schedule: boundary values must lie in [0, 1]");
}

}  // namespace

RateSchedule::RateSchedule(Rates constant) : PiecewiseConstant<Rates>(constant) {
  check_rates(constant);
}

RateSchedule::RateSchedule(std::vector<double> breakpoints, std::vector<Rates> values)
    : PiecewiseConstant<Rates>(std::move(breakpoints), std::move(values)) {
  for (const auto& r : this->values()) check_rates(r);
}

ScalarSchedule::ScalarSchedule(double constant) : PiecewiseConstant<double>(constant) {
  check_unit(constant);
}

ScalarSchedule::ScalarSchedule(std::vector<double> breakpoints, std::vector<double> values)
    : PiecewiseConstant<double>(std::move(breakpoints), std::move(values)) {
  for (double v : this->values()) check_unit(v);
}

}  // namespace asep
