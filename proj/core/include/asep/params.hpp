#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace asep {

/// Raised for parameter sets, schedules, grids or profiles that violate
/// their documented invariants.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// How strictly scaling exponents are checked against the proven windows.
enum class ParamCheck { strict, relaxed };

/// Per-rate reservoir exponents. When present they replace `theta` for the
/// corresponding boundary rate.
struct ThetaSplit {
  double alpha = 0.0;  // birth at the left end
  double gamma = 0.0;  // death at the left end
  double beta = 0.0;   // death at the right end
  double delta = 0.0;  // birth at the right end
};

/// Microscopic scaling constants of the open-boundary exclusion process.
///
/// Bulk hops to the right happen at rate p*n + sigma*n^(1+kappa), to the left
/// at sigma*n^(1+kappa); reservoirs act at rate n^(1+theta) times the
/// scheduled boundary rate.
struct ModelParams {
  int n = 2;
  double p = 1.0;
  double sigma = 1.0;
  double kappa = 0.75;
  double theta = 0.0;
  std::optional<double> kappa_prime;
  std::optional<ThetaSplit> theta_split;

  /// kappa_prime if set, otherwise the midpoint of the admissible window.
  double resolved_kappa_prime() const;

  /// Throws ParameterError on n < 2, p <= 0, sigma <= 0, non-finite values,
  /// or (strict mode) kappa outside (1/2, 1) or kappa_prime outside its window.
  void validate(ParamCheck check = ParamCheck::strict) const;

  double right_hop_rate() const;  // p n + sigma n^(1+kappa)
  double left_hop_rate() const;   // sigma n^(1+kappa)
  double reservoir_scale(double exponent) const;  // n^(1+exponent)
};

/// Open interval (lower, upper) allowed for kappa_prime given kappa:
/// lower = min{2 kappa - 1, (1 + kappa) / 3}, upper = kappa.
std::pair<double, double> kappa_prime_window(double kappa);

double default_kappa_prime(double kappa);

/// Mesoscopic block length floor(n^kappa'), clamped to [2, floor(n/4)]
/// (the lower clamp wins for tiny lattices).
int mesoscopic_k(const ModelParams& params, ParamCheck check = ParamCheck::strict);

}  // namespace asep
