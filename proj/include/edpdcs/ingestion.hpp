#ifndef EDPDCS_INGESTION_HPP
#define EDPDCS_INGESTION_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "edpdcs/core.hpp"

namespace edpdcs {

enum class ColumnRole { kFeature, kIgnored, kLabel };

struct ColumnSpec {
  std::string name;
  ColumnRole role = ColumnRole::kFeature;
  double observed_min = 0.0;  // filled in by normalize()
  double observed_max = 0.0;
};

struct CsvOptions {
  bool has_header = false;
  char delimiter = ',';
  std::string missing_token = "?";
};

struct LoadedData {
  Dataset raw;                      // feature columns only, unnormalized
  std::vector<ColumnSpec> features; // one per dataset column
  std::vector<std::vector<std::string>> labels;  // per row, label columns
  std::size_t dropped_rows = 0;     // rows with a missing feature value
};

// Reads a delimited text file. `columns` describes every field of a row by
// position. Blank lines and lines starting with '|' are skipped; fields are
// trimmed of whitespace and surrounding quotes. Rows whose feature fields
// hold the missing token are dropped and counted. Throws DataError for an
// unreadable file, a row with the wrong field count, a non-numeric feature
// (naming line and column), or a file with no usable rows.
LoadedData load_csv(const std::filesystem::path& path,
                    const std::vector<ColumnSpec>& columns,
                    const CsvOptions& options = {});

// Same as load_csv but parses in-memory text; `source` names it in errors.
LoadedData parse_csv(std::string_view text, const std::vector<ColumnSpec>& columns,
                     const CsvOptions& options = {}, std::string source = "<memory>");

struct NormalizedData {
  Dataset data;
  std::vector<ColumnSpec> features;  // with observed_min / observed_max set
};

// Per-column min-max scaling to [0,1]. Constant columns map to 0.5.
NormalizedData normalize(const Dataset& raw, std::vector<ColumnSpec> features = {});

// Inverse of normalize for non-constant columns; constant columns come back
// as their observed value.
Dataset denormalize(const Dataset& normalized, const std::vector<ColumnSpec>& features);

struct DatasetPreset {
  std::string name;
  std::vector<ColumnSpec> columns;
  CsvOptions csv;
  std::size_t default_k = 2;
};

// UCI Blood Transfusion: 4 numeric features plus the donation label, with a
// header row. k = 2.
DatasetPreset blood_preset();
// UCI Adult: the six continuous attributes (age, fnlwgt, education-num,
// capital-gain, capital-loss, hours-per-week) out of 15 fields, no header.
// Race is kept as the label. k = 5.
DatasetPreset adult_preset();
// Throws InvalidInput for an unknown name.
DatasetPreset preset_by_name(std::string_view name);

// Synthetic stand-ins with the shapes of the two benchmark datasets, for
// environments without the UCI files. Raw (unnormalized) values with
// integer-valued counts and months as in the originals.
LoadedData synthetic_blood_like(std::uint64_t seed);   // N = 748, d = 4
LoadedData synthetic_adult_like(std::uint64_t seed);   // N = 48842, d = 6

// Renders a LoadedData back to CSV text in the preset's column layout.
std::string to_csv(const LoadedData& data, const DatasetPreset& preset);

}  // namespace edpdcs

#endif  // EDPDCS_INGESTION_HPP
