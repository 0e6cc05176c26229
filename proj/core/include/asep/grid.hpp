#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace asep {

/// Uniform space-time grid on [0, T] x [0, 1].
///
/// Spatial samples are cell centers x_m = (m + 1/2) dx. Output frames are the
/// equally spaced times j T / frames, j = 0..frames; solvers shorten the last
/// step before each frame so frames are hit exactly.
struct Grid {
  int cells = 100;
  double dt = 1e-3;
  double T = 1.0;
  int frames = 10;

  double dx() const { return 1.0 / cells; }
  std::vector<double> frame_times() const;
  void validate() const;
};

/// Equally spaced times j T / frames, j = 0..frames.
std::vector<double> uniform_times(double T, int frames);

/// Space-time samples u(t_j, x_m) with every x sample covering a cell of width dx.
class DensityField {
 public:
  DensityField() = default;
  DensityField(std::vector<double> times, int cells);

  std::size_t frames() const { return times_.size(); }
  int cells() const { return cells_; }
  double dx() const { return 1.0 / cells_; }
  double x(int m) const { return (m + 0.5) / cells_; }
  const std::vector<double>& times() const { return times_; }

  double& at(std::size_t frame, int m) { return values_[frame * cells_ + m]; }
  double at(std::size_t frame, int m) const { return values_[frame * cells_ + m]; }

  std::span<double> frame(std::size_t j) { return {values_.data() + j * cells_, std::size_t(cells_)}; }
  std::span<const double> frame(std::size_t j) const {
    return {values_.data() + j * cells_, std::size_t(cells_)};
  }

  /// Piecewise-constant value at position x in frame j.
  double sample(std::size_t frame, double x) const;

  /// Index of the frame whose time equals t to within 1e-9 (relative to T); throws otherwise.
  std::size_t frame_index(double t) const;

 private:
  std::vector<double> times_;
  int cells_ = 0;
  std::vector<double> values_;
};

/// Time-averaged spatial L1 distance between two fields sharing frame times.
///
/// `b` is sampled piecewise-constantly at the cell centers of `a`. Only frames
/// with t >= t_min and cells with index in [first_cell, last_cell] of `a`
/// contribute; the result is the mean over frames of sum |a - b| dx.
double space_time_l1(const DensityField& a, const DensityField& b, double t_min = 0.0,
                     int first_cell = 0, int last_cell = -1);

/// Spatial L1 distance at one frame of each field, restricted to cells of `a`.
double frame_l1(const DensityField& a, std::size_t frame_a, const DensityField& b,
                std::size_t frame_b, int first_cell = 0, int last_cell = -1);

}  // namespace asep
