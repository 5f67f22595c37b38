#include "fxcov/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace fxcov {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_field(const std::string& field, int row, int col) {
  // Trim surrounding spaces; from_chars wants the bare number.
  std::size_t b = field.find_first_not_of(" \t");
  std::size_t e = field.find_last_not_of(" \t");
  if (b == std::string::npos)
    throw ParseError("empty numeric field at row " + std::to_string(row) +
                         ", column " + std::to_string(col),
                     row, col);
  double value = 0.0;
  const char* first = field.data() + b;
  const char* last = field.data() + e + 1;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last)
    throw ParseError("cannot parse '" + field.substr(b, e - b + 1) +
                         "' as a number at row " + std::to_string(row) +
                         ", column " + std::to_string(col),
                     row, col);
  return value;
}

}

CsvMatrix read_csv_matrix(const std::string& path, bool labels) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open '" + path + "' for reading");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> row_labels;
  std::string line;
  int lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_fields(line);
    std::size_t first_value = 0;
    if (labels) {
      row_labels.push_back(fields[0]);
      first_value = 1;
    }
    if (fields.size() <= first_value)
      throw ParseError("row " + std::to_string(lineno) + " has no values",
                       lineno, 1);
    std::vector<double> values;
    values.reserve(fields.size() - first_value);
    for (std::size_t f = first_value; f < fields.size(); ++f)
      values.push_back(
          parse_field(fields[f], lineno, static_cast<int>(f + 1)));
    if (width == 0) {
      width = values.size();
    } else if (values.size() != width) {
      throw ParseError("row " + std::to_string(lineno) + " has " +
                           std::to_string(values.size()) +
                           " values but earlier rows have " +
                           std::to_string(width),
                       lineno, static_cast<int>(values.size()));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty())
    throw ParseError("'" + path + "' contains no data rows");

  CsvMatrix out;
  out.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  out.labels = std::move(row_labels);
  out.has_labels = labels;
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot open '" + tmp.string() +
                               "' for writing");
    out << content;
    out.flush();
    if (!out)
      throw std::runtime_error("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec)
    throw std::runtime_error("cannot move '" + tmp.string() + "' into place: " +
                             ec.message());
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>* labels) {
  if (labels && static_cast<Eigen::Index>(labels->size()) != values.rows())
    throw std::invalid_argument("label count does not match row count");
  std::ostringstream out;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    if (labels) out << (*labels)[static_cast<std::size_t>(i)] << ',';
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(values(i, j));
    }
    out << '\n';
  }
  write_text_atomic(path, out.str());
}

}
