#include "asep/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "asep/params.hpp"

namespace asep {
namespace {

void check_unit(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0)
    throw ParameterError(std::string("profile: ") + what + " must lie in [0, 1]");
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParameterError("profile: bad number '" + text + "'");
  }
  if (used != text.size()) throw ParameterError("profile: bad number '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Profile::Profile(Shape shape) : shape_(std::move(shape)) {}

Profile Profile::constant(double c) {
  check_unit(c, "constant value");
  return Profile(Constant{c});
}

Profile Profile::step(double y) { return jump(0.0, 1.0, y); }

Profile Profile::jump(double left, double right, double at) {
  check_unit(left, "left value");
  check_unit(right, "right value");
  check_unit(at, "jump location");
  return Profile(Jump{left, right, at});
}

Profile Profile::sine(double amplitude) {
  if (!std::isfinite(amplitude) || std::abs(amplitude) > 0.5)
    throw ParameterError("profile: sine amplitude must satisfy |a| <= 1/2");
  return Profile(Sine{amplitude});
}

Profile Profile::sampled(std::vector<double> values) {
  if (values.size() < 2) throw ParameterError("profile: sampled profile needs >= 2 values");
  for (double v : values) check_unit(v, "sampled value");
  return Profile(Sampled{std::move(values)});
}

Profile Profile::parse(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw ParameterError("profile: empty description");
  const auto& name = parts[0];
  if (name == "constant" && parts.size() == 2) return constant(parse_number(parts[1]));
  if (name == "step" && parts.size() == 2) return step(parse_number(parts[1]));
  if (name == "sine" && parts.size() == 2) return sine(parse_number(parts[1]));
  if (name == "jump" && parts.size() == 4)
    return jump(parse_number(parts[1]), parse_number(parts[2]), parse_number(parts[3]));
  throw ParameterError("profile: unknown profile '" + text + "'");
}

double Profile::operator()(double x) const {
  return std::visit(
      overloaded{
          [](const Constant& c) { return c.value; },
          [x](const Jump& j) { return x > j.at ? j.right : j.left; },
          [x](const Sine& s) { return 0.5 + s.amplitude * std::sin(2.0 * std::numbers::pi * x); },
          [x](const Sampled& s) {
            const double pos = std::clamp(x, 0.0, 1.0) * double(s.values.size() - 1);
            const auto i = std::min<std::size_t>(std::size_t(pos), s.values.size() - 2);
            const double w = pos - double(i);
            return (1.0 - w) * s.values[i] + w * s.values[i + 1];
          },
      },
      shape_);
}

double Profile::cell_average(double a, double b) const {
  const double width = b - a;
  return std::visit(
      overloaded{
          [](const Constant& c) { return c.value; },
          [&](const Jump& j) {
            const double split_at = std::clamp(j.at, a, b);
            return (j.left * (split_at - a) + j.right * (b - split_at)) / width;
          },
          [&](const Sine& s) {
            const double k = 2.0 * std::numbers::pi;
            return 0.5 + s.amplitude * (std::cos(k * a) - std::cos(k * b)) / (k * width);
          },
          [&](const Sampled& s) {
            // piecewise linear: integrate exactly segment by segment
            const double h = 1.0 / double(s.values.size() - 1);
            double sum = 0.0;
            for (std::size_t i = 0; i + 1 < s.values.size(); ++i) {
              const double lo = std::max(a, i * h);
              const double hi = std::min(b, (i + 1) * h);
              if (hi <= lo) continue;
              sum += 0.5 * ((*this)(lo) + (*this)(hi)) * (hi - lo);
            }
            return sum / width;
          },
      },
      shape_);
}

std::vector<double> Profile::discretize(int cells) const {
  std::vector<double> u(cells);
  for (int m = 0; m < cells; ++m) u[m] = cell_average(double(m) / cells, double(m + 1) / cells);
  return u;
}

std::string Profile::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const Constant& c) { os << "constant:" << c.value; },
                 [&](const Jump& j) {
                   if (j.left == 0.0 && j.right == 1.0)
                     os << "step:" << j.at;
                   else
                     os << "jump:" << j.left << ':' << j.right << ':' << j.at;
                 },
                 [&](const Sine& s) { os << "sine:" << s.amplitude; },
                 [&](const Sampled&) { os << "sampled"; },
             },
             shape_);
  return os.str();
}

}  // namespace asep
