#include "asep/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace asep {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_snapshots_csv(const std::filesystem::path& path, std::span<const Snapshot> snapshots) {
  auto out = open_for_write(path);
  out << "t,site,eta\n";
  for (const auto& s : snapshots) {
    const auto t = format_double(s.t);
    for (std::size_t i = 0; i < s.eta.size(); ++i)
      out << t << ',' << i + 1 << ',' << int(s.eta[i]) << '\n';
  }
}

void write_density_csv(const std::filesystem::path& path, const DensityField& field) {
  auto out = open_for_write(path);
  out << "t,x,u\n";
  for (std::size_t j = 0; j < field.frames(); ++j) {
    const auto t = format_double(field.times()[j]);
    for (int m = 0; m < field.cells(); ++m)
      out << t << ',' << format_double(field.x(m)) << ',' << format_double(field.at(j, m)) << '\n';
  }
}

nlohmann::ordered_json to_json(const FluxCounters& flux) {
  return {{"injected_left", flux.injected_left},
          {"removed_left", flux.removed_left},
          {"injected_right", flux.injected_right},
          {"removed_right", flux.removed_right},
          {"net", flux.net()}};
}

void write_flux_json(const std::filesystem::path& path, std::span<const Snapshot> snapshots) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& s : snapshots) {
    nlohmann::ordered_json row{{"t", s.t}};
    row.update(to_json(s.flux));
    rows.push_back(row);
  }
  write_json(path, rows);
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
}

}  // namespace asep
