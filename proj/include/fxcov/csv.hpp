#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fxcov/errors.hpp"

namespace fxcov {

// Curve panel parsed from disk: one row per curve, columns are grid points.
// When the file carries labels the first field of each row is kept verbatim.
struct CsvMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> labels;  // empty when has_labels is false
  bool has_labels = false;
};

CsvMatrix read_csv_matrix(const std::string& path, bool labels);

// Writes with %.12g formatting; the file appears atomically (temp file in
// the same directory, then rename).
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>* labels = nullptr);

// Same atomicity guarantee for pre-rendered text (JSON reports).
void write_text_atomic(const std::string& path, const std::string& content);

std::string format_double(double v);

}
