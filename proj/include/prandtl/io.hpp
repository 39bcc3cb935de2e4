#pragma once

#include <string>
#include <vector>

#include "prandtl/fields.hpp"

namespace prandtl {

/// Write via a temp file in the same directory plus rename, so partial
/// outputs are never observed.
void atomic_write_text(const std::string& path, const std::string& content);
void atomic_write_bytes(const std::string& path, const std::vector<char>& bytes);

/// Snapshot container: one text header line
///   PRANDTL-SNAP 1 nx=<int> ny=<int> y_max=<float> t=<float>
/// followed by row-major (x outer, y inner) little-endian float64 payloads,
/// u first, then omega. The grid map parameters come from the run config.
void save_snapshot(const std::string& path, const State& s);

struct SnapshotHeader {
    int nx = 0;
    int ny = 0;
    double y_max = 0.0;
    double t = 0.0;
};

SnapshotHeader peek_snapshot(const std::string& path);
State load_snapshot(const std::string& path, std::shared_ptr<const SpectralGrid> grid);

/// Minimal CSV writer (17 significant digits, atomic).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

} // namespace prandtl
