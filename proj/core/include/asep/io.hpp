#pragma once

#include <filesystem>
#include <span>

#include <nlohmann/json.hpp>

#include "asep/grid.hpp"
#include "asep/sim.hpp"

namespace asep {

/// Columns t,site,eta; one row per site and snapshot.
void write_snapshots_csv(const std::filesystem::path& path, std::span<const Snapshot> snapshots);

/// Columns t,x,u.
void write_density_csv(const std::filesystem::path& path, const DensityField& field);

nlohmann::ordered_json to_json(const FluxCounters& flux);

/// Flux counters per snapshot: [{"t":..,"injected_left":..,...}, ...].
void write_flux_json(const std::filesystem::path& path, std::span<const Snapshot> snapshots);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace asep
