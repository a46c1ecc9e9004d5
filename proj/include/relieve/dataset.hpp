#pragma once

// Tabular dataset model: nominal/linear features, missing cells, CSV I/O.
//
// CSV conventions: UTF-8, comma separated, first line is the header, the
// class column comes last, `?` marks a missing cell. There is no quoting;
// tokens may not contain commas. A column is linear when every non-missing
// token parses as a finite decimal number, nominal otherwise; explicit
// schema hints override the inference.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "relieve/errors.hpp"

namespace relieve {

enum class FeatureKind { kNominal, kLinear };

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.emplace_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline std::optional<double> parse_number(std::string_view token) {
  if (token.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  if (!(value == value) || value > 1.7e308 || value < -1.7e308) return std::nullopt;
  return value;
}

// Shortest representation that round-trips the exact double.
inline std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

struct FeatureSchema {
  std::string name;
  FeatureKind kind = FeatureKind::kNominal;
  std::vector<std::string> values;  // nominal symbols, lexicographic, duplicate-free
  double min = 0.0;                 // observed range of a linear feature
  double max = 0.0;

  // Index of a nominal symbol, -1 when absent.
  int value_index(std::string_view v) const {
    const auto it = std::lower_bound(values.begin(), values.end(), v);
    if (it == values.end() || *it != v) return -1;
    return static_cast<int>(it - values.begin());
  }

  bool operator==(const FeatureSchema&) const = default;
};

// One matrix cell. For nominal features `value` holds the code of the symbol
// in the schema's value list; for linear features it is the number itself.
struct Cell {
  double value = 0.0;
  bool missing = false;

  bool operator==(const Cell&) const = default;
};

struct FeatureStats {
  std::vector<std::string> distinct;  // non-missing values, lexicographic
  std::size_t missing = 0;
  double min = 0.0;  // linear range; 0/0 for nominal
  double max = 0.0;
};

struct Dataset {
  std::string name;
  std::string class_name = "class";
  std::vector<FeatureSchema> schema;
  std::vector<std::string> class_values;  // lexicographic, duplicate-free
  std::vector<std::vector<Cell>> rows;    // rows[instance][feature]
  std::vector<int> labels;                // codes into class_values, one per row

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_features() const { return schema.size(); }

  int feature_index(std::string_view fname) const {
    for (std::size_t f = 0; f < schema.size(); ++f)
      if (schema[f].name == fname) return static_cast<int>(f);
    return -1;
  }

  int class_index(std::string_view label) const {
    const auto it = std::lower_bound(class_values.begin(), class_values.end(), label);
    if (it == class_values.end() || *it != label) return -1;
    return static_cast<int>(it - class_values.begin());
  }

  const std::string& label_of(std::size_t row) const { return class_values[static_cast<std::size_t>(labels[row])]; }
};

// Structural consistency gate; throws InternalError on breakage. Callers use
// it after hand-building datasets (generators, tests), not on every access.
inline void check_valid(const Dataset& d) {
  if (d.schema.empty()) throw InternalError("dataset: no features");
  if (d.rows.size() != d.labels.size()) throw InternalError("dataset: row/label count mismatch");
  if (d.class_values.empty()) throw InternalError("dataset: no class values");
  if (!std::is_sorted(d.class_values.begin(), d.class_values.end()))
    throw InternalError("dataset: class values not sorted");
  if (std::adjacent_find(d.class_values.begin(), d.class_values.end()) != d.class_values.end())
    throw InternalError("dataset: duplicate class value");
  std::set<std::string> names;
  for (const auto& fs : d.schema) {
    if (!names.insert(fs.name).second) throw InternalError("dataset: duplicate feature name");
    if (fs.kind == FeatureKind::kNominal) {
      if (fs.values.empty()) throw InternalError("dataset: nominal feature without values");
      if (!std::is_sorted(fs.values.begin(), fs.values.end()))
        throw InternalError("dataset: nominal values not sorted");
      if (std::adjacent_find(fs.values.begin(), fs.values.end()) != fs.values.end())
        throw InternalError("dataset: duplicate nominal value");
    }
  }
  if (names.count(d.class_name)) throw InternalError("dataset: class name collides with a feature");
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    if (d.rows[i].size() != d.schema.size()) throw InternalError("dataset: ragged row");
    if (d.labels[i] < 0 || static_cast<std::size_t>(d.labels[i]) >= d.class_values.size())
      throw InternalError("dataset: label code out of range");
    for (std::size_t f = 0; f < d.schema.size(); ++f) {
      const Cell& c = d.rows[i][f];
      if (c.missing) continue;
      if (d.schema[f].kind == FeatureKind::kNominal) {
        const auto code = static_cast<std::size_t>(c.value);
        if (c.value < 0 || code >= d.schema[f].values.size() || c.value != static_cast<double>(code))
          throw InternalError("dataset: nominal code out of range");
      }
    }
  }
}

// Content identity: everything the CSV carries. `name` is presentation-only.
inline bool same_content(const Dataset& a, const Dataset& b) {
  return a.class_name == b.class_name && a.schema == b.schema &&
         a.class_values == b.class_values && a.rows == b.rows && a.labels == b.labels;
}

using SchemaHints = std::map<std::string, FeatureKind>;

inline Dataset parse_csv(std::string_view text, const SchemaHints& hints = {},
                         std::string dataset_name = {}) {
  // Split into lines; tolerate CRLF and one trailing newline.
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      lines.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  while (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError("empty input: no header line");

  const auto header = detail::split_fields(lines[0]);
  if (header.size() < 2) throw ParseError("header must name at least one feature and the class");
  {
    std::set<std::string> seen;
    for (const auto& h : header) {
      if (h.empty()) throw ParseError("header contains an empty column name");
      if (!seen.insert(h).second) throw ParseError("duplicate column name: " + h);
    }
  }
  const std::size_t n_features = header.size() - 1;

  if (lines.size() < 2) throw ParseError("no instances: body is empty");

  std::vector<std::vector<std::string>> body;
  body.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto fields = detail::split_fields(lines[li]);
    if (fields.size() != header.size())
      throw ParseError("line " + std::to_string(li + 1) + ": expected " +
                       std::to_string(header.size()) + " cells, got " +
                       std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c)
      if (fields[c].empty())
        throw ParseError("line " + std::to_string(li + 1) + ": empty cell (use ? for missing)");
    if (fields.back() == "?")
      throw ParseError("line " + std::to_string(li + 1) + ": class cell may not be missing");
    body.push_back(std::move(fields));
  }

  Dataset d;
  d.name = std::move(dataset_name);
  d.class_name = header.back();

  // Column kinds: hints win, otherwise numeric inference over non-missing cells.
  std::vector<FeatureKind> kinds(n_features, FeatureKind::kLinear);
  for (std::size_t f = 0; f < n_features; ++f) {
    const auto hint = hints.find(header[f]);
    if (hint != hints.end()) {
      kinds[f] = hint->second;
      continue;
    }
    bool numeric = true;
    for (const auto& row : body) {
      if (row[f] == "?") continue;
      if (!detail::parse_number(row[f])) {
        numeric = false;
        break;
      }
    }
    kinds[f] = numeric ? FeatureKind::kLinear : FeatureKind::kNominal;
  }

  for (std::size_t f = 0; f < n_features; ++f) {
    FeatureSchema fs;
    fs.name = header[f];
    fs.kind = kinds[f];
    if (fs.kind == FeatureKind::kNominal) {
      std::set<std::string> vals;
      for (const auto& row : body)
        if (row[f] != "?") vals.insert(row[f]);
      if (vals.empty())
        throw ParseError("feature " + fs.name + ": all cells missing, no nominal values");
      fs.values.assign(vals.begin(), vals.end());
    } else {
      bool any = false;
      for (const auto& row : body) {
        if (row[f] == "?") continue;
        const double v = *detail::parse_number(row[f]);
        if (!any) {
          fs.min = fs.max = v;
          any = true;
        } else {
          fs.min = std::min(fs.min, v);
          fs.max = std::max(fs.max, v);
        }
      }
      if (!any)
        throw ParseError("feature " + fs.name + ": all cells missing, no linear range");
    }
    d.schema.push_back(std::move(fs));
  }

  {
    std::set<std::string> cls;
    for (const auto& row : body) cls.insert(row.back());
    d.class_values.assign(cls.begin(), cls.end());
  }

  d.rows.reserve(body.size());
  d.labels.reserve(body.size());
  for (const auto& row : body) {
    std::vector<Cell> cells(n_features);
    for (std::size_t f = 0; f < n_features; ++f) {
      if (row[f] == "?") {
        cells[f].missing = true;
      } else if (d.schema[f].kind == FeatureKind::kNominal) {
        cells[f].value = d.schema[f].value_index(row[f]);
      } else {
        cells[f].value = *detail::parse_number(row[f]);
      }
    }
    d.rows.push_back(std::move(cells));
    d.labels.push_back(d.class_index(row.back()));
  }
  return d;
}

inline std::string cell_text(const Dataset& d, std::size_t row, std::size_t feature) {
  const Cell& c = d.rows[row][feature];
  if (c.missing) return "?";
  if (d.schema[feature].kind == FeatureKind::kNominal)
    return d.schema[feature].values[static_cast<std::size_t>(c.value)];
  return detail::format_number(c.value);
}

inline std::string to_csv(const Dataset& d) {
  std::string out;
  for (const auto& fs : d.schema) {
    out += fs.name;
    out += ',';
  }
  out += d.class_name;
  out += '\n';
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    for (std::size_t f = 0; f < d.n_features(); ++f) {
      out += cell_text(d, i, f);
      out += ',';
    }
    out += d.label_of(i);
    out += '\n';
  }
  return out;
}

inline FeatureStats feature_stats(const Dataset& d, std::size_t feature) {
  if (feature >= d.n_features()) throw UsageError("feature_stats: feature index out of range");
  FeatureStats st;
  std::set<std::string> distinct;
  bool any = false;
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    const Cell& c = d.rows[i][feature];
    if (c.missing) {
      ++st.missing;
      continue;
    }
    distinct.insert(cell_text(d, i, feature));
    if (d.schema[feature].kind == FeatureKind::kLinear) {
      if (!any) {
        st.min = st.max = c.value;
        any = true;
      } else {
        st.min = std::min(st.min, c.value);
        st.max = std::max(st.max, c.value);
      }
    }
  }
  st.distinct.assign(distinct.begin(), distinct.end());
  return st;
}

// Per-algorithm result: a weight for every dataset feature plus provenance.
// `order` preserves the dataset's feature order; ties in rankings are broken
// by that original position, so serialization keeps it alongside the map.
struct FeatureWeights {
  std::vector<std::string> order;
  std::map<std::string, double> weights;
  std::string algorithm;
  std::map<std::string, std::string> params;
};

}  // namespace relieve
