#include "asep/params.hpp"

#include <algorithm>
#include <cmath>

namespace asep {

std::pair<double, double> kappa_prime_window(double kappa) {
  return {std::min(2.0 * kappa - 1.0, (1.0 + kappa) / 3.0), kappa};
}

double default_kappa_prime(double kappa) {
  const auto [lo, hi] = kappa_prime_window(kappa);
  return 0.5 * (lo + hi);
}

double ModelParams::resolved_kappa_prime() const {
  return kappa_prime ? *kappa_prime : default_kappa_prime(kappa);
}

void ModelParams::validate(ParamCheck check) const {
  if (n < 2) throw ParameterError("model: n must be >= 2");
  if (!std::isfinite(p) || p <= 0.0) throw ParameterError("model: p must be finite and > 0");
  if (!std::isfinite(sigma) || sigma <= 0.0)
    throw ParameterError("model: sigma must be finite and > 0");
  if (!std::isfinite(kappa) || !std::isfinite(theta))
    throw ParameterError("model: kappa and theta must be finite");
  if (theta_split) {
    const auto& s = *theta_split;
    if (!std::isfinite(s.alpha) || !std::isfinite(s.gamma) || !std::isfinite(s.beta) ||
        !std::isfinite(s.delta))
      throw ParameterError("model: theta_split exponents must be finite");
  }
  if (kappa_prime && !std::isfinite(*kappa_prime))
    throw ParameterError("model: kappa_prime must be finite");
  if (check == ParamCheck::relaxed) {
    if (kappa < 0.0) throw ParameterError("model: kappa must be >= 0");
    return;
  }
  if (!(kappa > 0.5 && kappa < 1.0))
    throw ParameterError("model: kappa must lie in (1/2, 1) (use --unsafe-params to override)");
  const auto [lo, hi] = kappa_prime_window(kappa);
  const double kp = resolved_kappa_prime();
  if (!(kp > lo && kp < hi))
    throw ParameterError("model: kappa_prime must lie in (" + std::to_string(lo) + ", " +
                         std::to_string(hi) + ")");
}

double ModelParams::right_hop_rate() const { return p * n + left_hop_rate(); }

double ModelParams::left_hop_rate() const { return sigma * std::pow(double(n), 1.0 + kappa); }

double ModelParams::reservoir_scale(double exponent) const {
  return std::pow(double(n), 1.0 + exponent);
}

int mesoscopic_k(const ModelParams& params, ParamCheck check) {
  params.validate(check);
  const double kp = params.resolved_kappa_prime();
  const auto raw = static_cast<long long>(std::floor(std::pow(double(params.n), kp)));
  const long long upper = params.n / 4;
  return static_cast<int>(std::max<long long>(2, std::min(raw, upper)));
}

}  // namespace asep
