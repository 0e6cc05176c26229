#include "asep/grid.hpp"

#include <algorithm>
#include <cmath>

#include "asep/params.hpp"

namespace asep {

std::vector<double> uniform_times(double T, int frames) {
  std::vector<double> times(frames + 1);
  for (int j = 0; j <= frames; ++j) times[j] = T * j / frames;
  times.back() = T;
  return times;
}

std::vector<double> Grid::frame_times() const { return uniform_times(T, frames); }

void Grid::validate() const {
  if (cells < 2) throw ParameterError("grid: cells must be >= 2");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("grid: dt must be > 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("grid: T must be > 0");
  if (frames < 1) throw ParameterError("grid: frames must be >= 1");
}

DensityField::DensityField(std::vector<double> times, int cells)
    : times_(std::move(times)), cells_(cells), values_(times_.size() * std::size_t(cells), 0.0) {}

double DensityField::sample(std::size_t frame, double x) const {
  const int m = std::clamp(static_cast<int>(std::floor(x * cells_)), 0, cells_ - 1);
  return at(frame, m);
}

std::size_t DensityField::frame_index(double t) const {
  const double scale = std::max(1.0, times_.empty() ? 1.0 : std::abs(times_.back()));
  for (std::size_t j = 0; j < times_.size(); ++j)
    if (std::abs(times_[j] - t) <= 1e-9 * scale) return j;
  throw ParameterError("field: no frame at the requested time");
}

double frame_l1(const DensityField& a, std::size_t frame_a, const DensityField& b,
                std::size_t frame_b, int first_cell, int last_cell) {
  if (last_cell < 0) last_cell = a.cells() - 1;
  double sum = 0.0;
  for (int m = first_cell; m <= last_cell; ++m)
    sum += std::abs(a.at(frame_a, m) - b.sample(frame_b, a.x(m)));
  return sum * a.dx();
}

double space_time_l1(const DensityField& a, const DensityField& b, double t_min, int first_cell,
                     int last_cell) {
  double sum = 0.0;
  int used = 0;
  for (std::size_t j = 0; j < a.frames(); ++j) {
    const double t = a.times()[j];
    if (t < t_min) continue;
    sum += frame_l1(a, j, b, b.frame_index(t), first_cell, last_cell);
    ++used;
  }
  if (used == 0) throw ParameterError("space_time_l1: no frames in the comparison window");
  return sum / used;
}

}  // namespace asep
