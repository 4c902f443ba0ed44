#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "sparsesm/core.hpp"

namespace sparsesm {

struct CsvOptions {
  bool has_header = true;
  /// Column holding true labels: a header name, or a 1-based column number.
  std::optional<std::string> label_column;
  char delimiter = ',';
};

struct CsvData {
  DataMatrix X;
  /// Labels factorized in order of first appearance (first label seen is cluster 1).
  std::optional<Partition> labels;
  /// Original label strings, indexed by 0-based cluster.
  std::vector<std::string> label_names;
  /// Header names of the numeric columns (empty without a header).
  std::vector<std::string> feature_names;
};

/// Errors: IoError, EmptyInput, RaggedRows(line), NonNumericCell(line, col),
/// UnknownLabelColumn. Line and column numbers are 1-based and count the
/// header line. Blank lines are skipped.
CsvData ingest_csv(const std::string& path, const CsvOptions& options = {});
CsvData parse_csv(std::istream& in, const CsvOptions& options = {});

/// Shortest round-tripping decimal form.
std::string format_double(double value);

std::string matrix_to_csv(const Matrix& values, const std::vector<std::string>& header = {});

/// Reads labels from a single-column file (one label per line) or from a
/// JSON file holding an array, or an object with a "truth" or "labels" array.
/// Labels are factorized like ingest_csv. `has_header` applies to text files.
Partition read_labels(const std::string& path, bool has_header = true);
std::string labels_to_csv(const Partition& partition, const std::string& header = "cluster");

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& contents);

}  // namespace sparsesm
