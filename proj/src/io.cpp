#include "sparsesm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <json.hpp>
#include <sstream>

namespace sparsesm {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Splits one CSV record. Double quotes group a field; "" inside quotes is a
/// literal quote.
std::vector<std::string> split_record(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

bool parse_number(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

struct Factorizer {
  std::map<std::string, int> codes;
  std::vector<std::string> names;
  std::vector<int> labels;

  void add(const std::string& value) {
    auto [it, inserted] = codes.emplace(value, static_cast<int>(names.size()));
    if (inserted) names.push_back(value);
    labels.push_back(it->second);
  }
  Partition partition() const { return Partition(labels, static_cast<int>(names.size())); }
};

}  // namespace

CsvData parse_csv(std::istream& in, const CsvOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::optional<std::size_t> label_col;
  std::size_t width = 0;
  std::vector<std::vector<double>> rows;
  Factorizer factor;

  auto resolve_label = [&]() {
    if (!options.label_column) return;
    const std::string& key = *options.label_column;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == key) {
        label_col = c;
        return;
      }
    }
    std::size_t idx = 0;
    const auto res = std::from_chars(key.data(), key.data() + key.size(), idx);
    if (res.ec == std::errc() && res.ptr == key.data() + key.size() && idx >= 1 && idx <= width) {
      label_col = idx - 1;
      return;
    }
    throw Error(ErrorCode::UnknownLabelColumn, "label column '" + key + "' not found");
  };

  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_record(line, options.delimiter);
    if (first) {
      first = false;
      width = fields.size();
      if (options.has_header) {
        header = std::move(fields);
        resolve_label();
        continue;
      }
      resolve_label();
    }
    if (fields.size() != width) {
      throw Error(ErrorCode::RaggedRows,
                  "line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                      " fields, expected " + std::to_string(width),
                  line_no);
    }
    std::vector<double> values;
    values.reserve(width);
    for (std::size_t c = 0; c < width; ++c) {
      if (label_col && c == *label_col) {
        factor.add(fields[c]);
        continue;
      }
      double v = 0.0;
      if (!parse_number(fields[c], v)) {
        throw Error(ErrorCode::NonNumericCell,
                    "non-numeric cell '" + fields[c] + "' at line " + std::to_string(line_no) + ", column " +
                        std::to_string(c + 1),
                    line_no, c + 1);
      }
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFiniteEntry,
                    "non-finite cell at line " + std::to_string(line_no) + ", column " + std::to_string(c + 1),
                    line_no, c + 1);
      }
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "CSV contains no data rows");
  const std::size_t p = rows.front().size();
  if (p == 0) throw Error(ErrorCode::EmptyInput, "CSV contains no numeric columns");

  Matrix values(static_cast<Index>(rows.size()), static_cast<Index>(p));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < p; ++j) values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  CsvData out{validate_matrix(std::move(values)), std::nullopt, {}, {}};
  if (label_col) {
    out.labels = factor.partition();
    out.label_names = factor.names;
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!label_col || c != *label_col) out.feature_names.push_back(header[c]);
  }
  return out;
}

CsvData ingest_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  return parse_csv(in, options);
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string matrix_to_csv(const Matrix& values, const std::vector<std::string>& header) {
  std::string out;
  if (!header.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c) out += ',';
      out += header[c];
    }
    out += '\n';
  }
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j) out += ',';
      out += format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

Partition read_labels(const std::string& path, bool has_header) {
  const std::string text = read_text(path);
  Factorizer factor;
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::IoError, "'" + path + "' is not valid JSON: " + e.what());
    }
    const nlohmann::json* arr = &doc;
    if (doc.is_object()) {
      if (doc.contains("truth")) arr = &doc["truth"];
      else if (doc.contains("labels")) arr = &doc["labels"];
    }
    if (!arr->is_array()) throw Error(ErrorCode::IoError, "'" + path + "' holds no label array");
    for (const auto& v : *arr) factor.add(v.is_string() ? v.get<std::string>() : v.dump());
  } else {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool seen_header = false;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string cell = trim(line);
      if (cell.empty()) continue;
      if (cell.find(',') != std::string::npos) {
        throw Error(ErrorCode::RaggedRows, "label file must have a single column", line_no);
      }
      if (has_header && !seen_header) {
        seen_header = true;
        continue;
      }
      factor.add(cell);
    }
  }
  if (factor.labels.empty()) throw Error(ErrorCode::EmptyInput, "'" + path + "' contains no labels");
  return factor.partition();
}

std::string labels_to_csv(const Partition& partition, const std::string& header) {
  std::string out = header + '\n';
  for (int l : partition.one_based()) out += std::to_string(l) + '\n';
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

}  // namespace sparsesm
