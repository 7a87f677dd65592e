#include "edpdcs/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "edpdcs/errors.hpp"

namespace edpdcs {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

}  // namespace

LoadedData parse_csv(std::string_view text, const std::vector<ColumnSpec>& columns,
                     const CsvOptions& options, std::string source) {
  if (columns.empty()) throw InvalidInput("column spec must not be empty");
  std::vector<std::size_t> feature_cols;
  std::vector<std::size_t> label_cols;
  std::vector<ColumnSpec> features;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].role == ColumnRole::kFeature) {
      feature_cols.push_back(c);
      features.push_back(columns[c]);
    } else if (columns[c].role == ColumnRole::kLabel) {
      label_cols.push_back(c);
    }
  }
  if (feature_cols.empty()) throw InvalidInput("column spec has no feature column");

  std::vector<double> values;
  std::vector<std::vector<std::string>> labels;
  std::size_t dropped = 0;
  bool header_pending = options.has_header;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '|') continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<std::string_view> fields = split(line, options.delimiter);
    // Tolerate one trailing delimiter.
    if (fields.size() == columns.size() + 1 && fields.back().empty()) fields.pop_back();
    if (fields.size() != columns.size()) {
      throw DataError(source + ": line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(columns.size()));
    }
    std::vector<double> row;
    row.reserve(feature_cols.size());
    bool missing = false;
    for (std::size_t c : feature_cols) {
      std::string_view f = fields[c];
      if (f == options.missing_token || f.empty()) {
        missing = true;
        break;
      }
      double v = 0.0;
      const char* first = f.data();
      const char* last = f.data() + f.size();
      if (*first == '+') ++first;
      const auto res = std::from_chars(first, last, v);
      if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
        throw DataError(source + ": line " + std::to_string(line_no) + ", column " +
                        std::to_string(c + 1) + " ('" + columns[c].name +
                        "'): cannot parse '" + std::string(f) + "' as a number");
      }
      row.push_back(v);
    }
    if (missing) {
      ++dropped;
      continue;
    }
    values.insert(values.end(), row.begin(), row.end());
    std::vector<std::string> lab;
    for (std::size_t c : label_cols) lab.emplace_back(fields[c]);
    labels.push_back(std::move(lab));
  }
  if (values.empty()) {
    throw DataError(source + ": no data rows" +
                    (dropped ? " (" + std::to_string(dropped) + " dropped as missing)"
                             : std::string()));
  }
  return LoadedData{Dataset(std::move(values), feature_cols.size(), false, std::move(source)),
                    std::move(features), std::move(labels), dropped};
}

LoadedData load_csv(const std::filesystem::path& path,
                    const std::vector<ColumnSpec>& columns, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw DataError("error reading '" + path.string() + "'");
  return parse_csv(buf.str(), columns, options, path.string());
}

NormalizedData normalize(const Dataset& raw, std::vector<ColumnSpec> features) {
  const std::size_t d = raw.n_dims();
  if (features.empty()) {
    for (std::size_t j = 0; j < d; ++j) features.push_back({"x" + std::to_string(j)});
  }
  if (features.size() != d) throw InvalidInput("one column spec per feature required");

  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < raw.n_rows(); ++i) {
    auto r = raw.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], r[j]);
      hi[j] = std::max(hi[j], r[j]);
    }
  }
  std::vector<double> out(raw.values().begin(), raw.values().end());
  for (std::size_t i = 0; i < raw.n_rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double& v = out[i * d + j];
      if (hi[j] > lo[j]) {
        v = std::clamp((v - lo[j]) / (hi[j] - lo[j]), 0.0, 1.0);
      } else {
        v = 0.5;
      }
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    features[j].observed_min = lo[j];
    features[j].observed_max = hi[j];
  }
  return NormalizedData{Dataset(std::move(out), d, true, raw.source_label()),
                        std::move(features)};
}

Dataset denormalize(const Dataset& normalized, const std::vector<ColumnSpec>& features) {
  const std::size_t d = normalized.n_dims();
  if (features.size() != d) throw InvalidInput("one column spec per feature required");
  std::vector<double> out(normalized.values().begin(), normalized.values().end());
  for (std::size_t i = 0; i < normalized.n_rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double lo = features[j].observed_min;
      const double hi = features[j].observed_max;
      double& v = out[i * d + j];
      v = hi > lo ? lo + v * (hi - lo) : lo;
    }
  }
  return Dataset(std::move(out), d, false, normalized.source_label());
}

DatasetPreset blood_preset() {
  DatasetPreset p;
  p.name = "blood";
  p.columns = {{"Recency (months)"},
               {"Frequency (times)"},
               {"Monetary (c.c. blood)"},
               {"Time (months)"},
               {"whether he/she donated blood in March 2007", ColumnRole::kLabel}};
  p.csv.has_header = true;
  p.default_k = 2;
  return p;
}

DatasetPreset adult_preset() {
  using R = ColumnRole;
  DatasetPreset p;
  p.name = "adult";
  p.columns = {{"age"},
               {"workclass", R::kIgnored},
               {"fnlwgt"},
               {"education", R::kIgnored},
               {"education-num"},
               {"marital-status", R::kIgnored},
               {"occupation", R::kIgnored},
               {"relationship", R::kIgnored},
               {"race", R::kLabel},
               {"sex", R::kIgnored},
               {"capital-gain"},
               {"capital-loss"},
               {"hours-per-week"},
               {"native-country", R::kIgnored},
               {"income", R::kIgnored}};
  p.csv.has_header = false;
  p.default_k = 5;
  return p;
}

DatasetPreset preset_by_name(std::string_view name) {
  if (name == "blood") return blood_preset();
  if (name == "adult") return adult_preset();
  throw InvalidInput("unknown dataset preset '" + std::string(name) + "'");
}

std::string to_csv(const LoadedData& data, const DatasetPreset& preset) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  if (preset.csv.has_header) {
    for (std::size_t c = 0; c < preset.columns.size(); ++c) {
      if (c) os << preset.csv.delimiter;
      os << '"' << preset.columns[c].name << '"';
    }
    os << '\n';
  }
  for (std::size_t i = 0; i < data.raw.n_rows(); ++i) {
    auto r = data.raw.row(i);
    std::size_t f = 0;
    std::size_t l = 0;
    for (std::size_t c = 0; c < preset.columns.size(); ++c) {
      if (c) os << preset.csv.delimiter;
      switch (preset.columns[c].role) {
        case ColumnRole::kFeature: os << r[f++]; break;
        case ColumnRole::kLabel: os << data.labels.at(i).at(l++); break;
        case ColumnRole::kIgnored: os << "na"; break;
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace edpdcs
