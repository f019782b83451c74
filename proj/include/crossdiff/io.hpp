#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crossdiff/equilibria.hpp"
#include "crossdiff/metrics.hpp"
#include "crossdiff/ode.hpp"
#include "crossdiff/pde.hpp"
#include "crossdiff/stability.hpp"

namespace crossdiff {

/// Writes `text` to `path`, replacing any existing file. Throws Error on failure.
void write_text(const std::filesystem::path& path, std::string_view text);

/// Columns x, y, value; one row per node in storage order.
std::string field_csv(const FieldGrid& g, Field f);
/// Columns t, u, v, w.
std::string trajectory_csv(const Trajectory& tr);
/// Columns k, growth, frequency.
std::string dispersion_csv(const DispersionResult& d);
/// Columns p2, c, exists (0/1).
std::string region_csv(const RegionGrid& r);
/// Columns kind, u, v, w, eig{1,2,3}_re, eig{1,2,3}_im, stability.
std::string equilibria_csv(std::span<const Equilibrium> eqs);
/// Columns t, value.
std::string probe_csv(const ProbeSeries& p);

/// Little-endian layout: nx, ny (int64), dx, dy, t (float64), then the u, v and w
/// arrays (float64, row-major, rows of constant y).
std::vector<std::uint8_t> encode_snapshot(const FieldGrid& g);
/// Inverse of encode_snapshot. Throws ArgumentError on a truncated or inconsistent buffer.
FieldGrid decode_snapshot(std::span<const std::uint8_t> bytes);
void write_snapshot_binary(const std::filesystem::path& path, const FieldGrid& g);
FieldGrid read_snapshot_binary(const std::filesystem::path& path);

/// RGB triple of the viridis-like colormap at t in [0, 1] (clamped).
std::array<std::uint8_t, 3> colormap(double t);
/// 8-bit RGB PNG of a row-major field, min-max normalized; image top is y = 1.
std::vector<std::uint8_t> heatmap_png(std::span<const double> field, std::size_t nx, std::size_t ny);
/// Minimal PNG encoder (RGB, 8 bit, no interlace).
std::vector<std::uint8_t> encode_png_rgb(std::size_t width, std::size_t height, std::span<const std::uint8_t> rgb);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Record of a CLI run, written before any computation.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> args;  ///< the command line after the program name
  std::string config_path;
  std::string output_dir;
  ModelParams params;
  std::vector<std::pair<std::string, std::string>> extra;  ///< resolved solver settings
  std::string version;
};

/// key=value text; the determinism marker records that runs are seedless.
std::string to_text(const RunManifest& m);

}  // namespace crossdiff
