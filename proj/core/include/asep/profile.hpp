#pragma once

#include <string>
#include <variant>
#include <vector>

namespace asep {

/// Initial or stationary density profile on [0, 1] with values in [0, 1].
///
/// Textual forms accepted by parse():
///   constant:c        u = c
///   step:y            u = 1 on (y, 1), 0 elsewhere
///   jump:ul:ur:x0     u = ul left of x0, ur right of x0
///   sine:a            u = 1/2 + a sin(2 pi x), |a| <= 1/2
class Profile {
 public:
  struct Constant {
    double value;
  };
  struct Jump {
    double left;
    double right;
    double at;
  };
  struct Sine {
    double amplitude;
  };
  /// Values on the nodes i / (size - 1), linearly interpolated.
  struct Sampled {
    std::vector<double> values;
  };

  Profile() : Profile(Constant{0.0}) {}

  static Profile constant(double c);
  static Profile step(double y);
  static Profile jump(double left, double right, double at);
  static Profile sine(double amplitude);
  static Profile sampled(std::vector<double> values);
  static Profile parse(const std::string& text);

  double operator()(double x) const;

  /// Exact mean of the profile over [a, b] (a < b).
  double cell_average(double a, double b) const;

  /// Cell averages on `cells` uniform cells.
  std::vector<double> discretize(int cells) const;

  /// Canonical text form (sampled profiles render as "sampled").
  std::string describe() const;

  const auto& variant() const { return shape_; }

 private:
  using Shape = std::variant<Constant, Jump, Sine, Sampled>;
  explicit Profile(Shape shape);

  Shape shape_;
};

}  // namespace asep
