#pragma once

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tefb/core/errors.hpp"
#include "tefb/data/dataset.hpp"

namespace tefb {

/// Column roles for one CSV file. Read from a small `key = value` text file:
///
///   name = iris
///   header = false
///   delimiter = ,            # or "whitespace"
///   label = last             # column index, "first" or "last"
///   categorical = 0          # comma-separated column indices
///   ignore = 0               # columns dropped entirely
///   missing = ?              # tokens marking a missing value
///   label_bins = 8.5, 10.5   # bin a numeric label at these cut points
///   classes = a, b           # fixed class vocabulary, in code order
///   levels.3 = x, y, z       # fixed category vocabulary for column 3
///
/// Column indices are 0-based positions in the file.
struct Schema {
  std::string name;
  bool header = false;
  bool whitespace_delimited = false;
  char delimiter = ',';
  std::string label = "last";
  std::set<std::size_t> categorical;
  std::set<std::size_t> ignore;
  std::vector<std::string> missing_tokens{"?"};
  std::vector<double> label_bins;
  std::vector<std::string> classes;
  std::map<std::size_t, std::vector<std::string>> levels;
};

/// Rows dropped because a used column held a missing value (1-based line
/// numbers).
struct LoadReport {
  std::vector<std::size_t> rejected_lines;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(first, last - first + 1));
  if (out.size() >= 2 && (out.front() == '"' || out.front() == '\'') && out.back() == out.front()) {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

inline std::vector<std::string> split_list(std::string_view s, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(sep, start);
    const auto piece = trim(s.substr(start, end == std::string_view::npos ? s.npos : end - start));
    if (!piece.empty()) out.push_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

inline std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
  return v;
}

inline std::size_t parse_index(const std::string& s, const std::string& key) {
  const auto v = parse_double(s);
  if (!v || *v < 0 || *v != static_cast<double>(static_cast<std::size_t>(*v))) {
    throw IngestError("schema key '" + key + "': '" + s + "' is not a column index");
  }
  return static_cast<std::size_t>(*v);
}

inline bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw IngestError("schema key '" + key + "': expected true or false, got '" + s + "'");
}

inline std::vector<std::string> split_fields(const std::string& line, const Schema& schema) {
  std::vector<std::string> fields;
  if (schema.whitespace_delimited) {
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) fields.push_back(trim(tok));
    return fields;
  }
  std::size_t start = 0;
  while (true) {
    const auto end = line.find(schema.delimiter, start);
    fields.push_back(trim(std::string_view(line).substr(start, end == std::string::npos ? std::string::npos : end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return fields;
}

/// Sorted vocabulary; numerically when every value parses as a number.
inline std::vector<std::string> sorted_vocabulary(const std::set<std::string>& values) {
  std::vector<std::string> vocab(values.begin(), values.end());
  const bool numeric = std::all_of(vocab.begin(), vocab.end(),
                                   [](const std::string& v) { return parse_double(v).has_value(); });
  if (numeric) {
    std::stable_sort(vocab.begin(), vocab.end(), [](const std::string& a, const std::string& b) {
      return *parse_double(a) < *parse_double(b);
    });
  }
  return vocab;
}

}  // namespace detail

inline Schema parse_schema(std::istream& in) {
  Schema schema;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw IngestError("schema line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key == "name") {
      schema.name = value;
    } else if (key == "header") {
      schema.header = detail::parse_bool(value, key);
    } else if (key == "delimiter") {
      if (value == "whitespace") {
        schema.whitespace_delimited = true;
      } else if (value.size() == 1) {
        schema.delimiter = value[0];
      } else if (value.empty()) {
        schema.delimiter = ',';  // "delimiter = ," has its comma trimmed away
      } else if (value == "tab") {
        schema.delimiter = '\t';
      } else if (value == "semicolon") {
        schema.delimiter = ';';
      } else {
        throw IngestError("schema line " + std::to_string(line_no) + ": bad delimiter '" + value + "'");
      }
    } else if (key == "label") {
      schema.label = value;
    } else if (key == "categorical") {
      for (const auto& v : detail::split_list(value)) schema.categorical.insert(detail::parse_index(v, key));
    } else if (key == "ignore") {
      for (const auto& v : detail::split_list(value)) schema.ignore.insert(detail::parse_index(v, key));
    } else if (key == "missing") {
      schema.missing_tokens = detail::split_list(value);
    } else if (key == "label_bins") {
      for (const auto& v : detail::split_list(value)) {
        const auto cut = detail::parse_double(v);
        if (!cut) throw IngestError("schema key 'label_bins': '" + v + "' is not a number");
        schema.label_bins.push_back(*cut);
      }
      if (!std::is_sorted(schema.label_bins.begin(), schema.label_bins.end())) {
        throw IngestError("schema key 'label_bins' must be ascending");
      }
    } else if (key == "classes") {
      schema.classes = detail::split_list(value);
    } else if (key.rfind("levels.", 0) == 0) {
      schema.levels[detail::parse_index(key.substr(7), key)] = detail::split_list(value);
    } else {
      throw IngestError("schema line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return schema;
}

inline Schema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open schema file " + path);
  Schema schema = parse_schema(in);
  if (schema.name.empty()) {
    const auto slash = path.find_last_of('/');
    const auto base = path.substr(slash == std::string::npos ? 0 : slash + 1);
    schema.name = base.substr(0, base.find('.'));
  }
  return schema;
}

/// Reads a delimited file into a Dataset with raw (unscaled) features.
/// Categorical columns become integer codes in vocabulary order; scaling
/// to [0, 1] is left to normalize() or split() so test rows never
/// influence the ranges.
inline Dataset load_csv(std::istream& in, const Schema& schema, LoadReport* report = nullptr) {
  struct Row {
    std::size_t line;
    std::vector<std::string> fields;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = schema.header;
  std::optional<std::size_t> width;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    auto fields = detail::split_fields(line, schema);
    if (!width) width = fields.size();
    if (fields.size() != *width) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected " << *width << " fields, found " << fields.size();
      throw IngestError(msg.str());
    }
    rows.push_back({line_no, std::move(fields)});
  }
  if (rows.empty()) throw IngestError("no data rows in " + (schema.name.empty() ? std::string("input") : schema.name));

  const std::size_t columns = *width;
  std::size_t label_col = 0;
  if (schema.label == "last") {
    label_col = columns - 1;
  } else if (schema.label == "first") {
    label_col = 0;
  } else {
    label_col = detail::parse_index(schema.label, "label");
  }
  if (label_col >= columns) throw IngestError("label column outside the file's " + std::to_string(columns) + " columns");
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < columns; ++c) {
    if (c != label_col && !schema.ignore.count(c)) feature_cols.push_back(c);
  }
  for (std::size_t c : schema.categorical) {
    if (c >= columns) throw IngestError("categorical column " + std::to_string(c) + " outside the file");
  }

  auto is_missing = [&](const std::string& v) {
    return v.empty() ||
           std::find(schema.missing_tokens.begin(), schema.missing_tokens.end(), v) != schema.missing_tokens.end();
  };
  std::vector<const Row*> kept;
  for (const auto& row : rows) {
    bool missing = is_missing(row.fields[label_col]);
    for (std::size_t c : feature_cols) missing = missing || is_missing(row.fields[c]);
    if (missing) {
      if (report) report->rejected_lines.push_back(row.line);
      continue;
    }
    kept.push_back(&row);
  }
  if (kept.empty()) throw IngestError("every row has missing values");

  // Vocabularies.
  std::map<std::size_t, std::vector<std::string>> vocab;
  for (std::size_t c : feature_cols) {
    if (!schema.categorical.count(c)) continue;
    if (auto it = schema.levels.find(c); it != schema.levels.end()) {
      vocab[c] = it->second;
    } else {
      std::set<std::string> seen;
      for (const Row* r : kept) seen.insert(r->fields[c]);
      vocab[c] = detail::sorted_vocabulary(seen);
    }
  }
  std::vector<std::string> classes;
  if (!schema.label_bins.empty()) {
    for (std::size_t b = 0; b <= schema.label_bins.size(); ++b) {
      std::ostringstream name;
      if (b == 0) name << "<" << schema.label_bins[0];
      else if (b == schema.label_bins.size()) name << ">=" << schema.label_bins.back();
      else name << schema.label_bins[b - 1] << "-" << schema.label_bins[b];
      classes.push_back(name.str());
    }
  } else if (!schema.classes.empty()) {
    classes = schema.classes;
  } else {
    std::set<std::string> seen;
    for (const Row* r : kept) seen.insert(r->fields[label_col]);
    classes = detail::sorted_vocabulary(seen);
  }

  auto code_of = [](const std::vector<std::string>& v, const std::string& value) -> std::optional<std::size_t> {
    const auto it = std::find(v.begin(), v.end(), value);
    if (it == v.end()) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
  };

  Dataset data;
  data.name = schema.name;
  data.class_names = classes;
  data.class_count = classes.size();
  data.features = Matrix(kept.size(), feature_cols.size());
  data.labels.reserve(kept.size());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const Row& row = *kept[r];
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
      const std::size_t c = feature_cols[f];
      const std::string& v = row.fields[c];
      if (auto vt = vocab.find(c); vt != vocab.end()) {
        const auto code = code_of(vt->second, v);
        if (!code) {
          std::ostringstream msg;
          msg << "line " << row.line << ", column " << c << ": unknown category '" << v << "'";
          throw IngestError(msg.str());
        }
        data.features(r, f) = static_cast<double>(*code);
      } else {
        const auto num = detail::parse_double(v);
        if (!num) {
          std::ostringstream msg;
          msg << "line " << row.line << ", column " << c << ": '" << v << "' is not numeric";
          throw IngestError(msg.str());
        }
        data.features(r, f) = *num;
      }
    }
    const std::string& label = row.fields[label_col];
    if (!schema.label_bins.empty()) {
      const auto num = detail::parse_double(label);
      if (!num) {
        std::ostringstream msg;
        msg << "line " << row.line << ": label '" << label << "' is not numeric";
        throw IngestError(msg.str());
      }
      data.labels.push_back(static_cast<std::size_t>(
          std::upper_bound(schema.label_bins.begin(), schema.label_bins.end(), *num) - schema.label_bins.begin()));
    } else {
      const auto code = code_of(classes, label);
      if (!code) {
        std::ostringstream msg;
        msg << "line " << row.line << ": unknown class '" << label << "'";
        throw IngestError(msg.str());
      }
      data.labels.push_back(*code);
    }
  }
  data.feature_ranges = MinMaxScaler::fit(data.features).ranges;
  data.validate();
  return data;
}

inline Dataset load_csv(const std::string& path, const Schema& schema, LoadReport* report = nullptr) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open data file " + path);
  Schema named = schema;
  if (named.name.empty()) named.name = path;
  return load_csv(in, named, report);
}

}  // namespace tefb
