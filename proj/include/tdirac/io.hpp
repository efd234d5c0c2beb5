#pragma once

// On-disk formats.
//
// SpinorField file: "TDSF", uint32 little-endian header length, a JSON
// header {"d", "lattice_radius", "d0", ...extra}, then the coefficients as
// little-endian (re, im) float64 pairs in lattice order, spinor index fastest.
//
// Trajectory directory: manifest.json plus frames/frame_NNNNNN.tdsf.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdirac/spectral.hpp"

namespace tdirac::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_field(std::ostream& out, const SpinorField& f,
                 const nlohmann::json& extra = nlohmann::json::object());
SpinorField read_field(std::istream& in, nlohmann::json* header = nullptr);

void save_field(const std::filesystem::path& path, const SpinorField& f,
                const nlohmann::json& extra = nlohmann::json::object());
SpinorField load_field(const std::filesystem::path& path, nlohmann::json* header = nullptr);

/// Writes frames and a manifest with times, dt, t0 and every key of `meta`.
void save_trajectory(const std::filesystem::path& dir, const Trajectory& tr,
                     const nlohmann::json& meta = nlohmann::json::object());
Trajectory load_trajectory(const std::filesystem::path& dir,
                           nlohmann::json* manifest = nullptr);

/// Pretty-printed, key-sorted, newline-terminated.
void save_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json load_json(const std::filesystem::path& path);

/// Long-format CSV rows: series,window,index,time,value.
struct CsvSeries {
  std::string name;
  int window = 0;
  std::vector<double> time;   // may be empty; written as blank
  std::vector<double> value;
};
void write_series_csv(std::ostream& out, const std::vector<CsvSeries>& series);
void save_series_csv(const std::filesystem::path& path, const std::vector<CsvSeries>& series);

}  // namespace tdirac::io
