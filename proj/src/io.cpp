#include "hiap/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hiap {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    std::size_t a = field.find_first_not_of(" \t\r");
    std::size_t b = field.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::vector<std::vector<double>> read_numeric_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    auto fields = split_csv_line(line);
    std::vector<double> row(fields.size());
    bool ok = true;
    for (std::size_t k = 0; k < fields.size(); ++k)
      ok = ok && parse_double(fields[k], row[k]);
    if (!ok) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw input_error("non-numeric CSV field: " + line);
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw input_error("ragged CSV row: " + line);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Dataset read_points_csv(std::istream& in, bool has_weight_column) {
  auto rows = read_numeric_rows(in);
  if (rows.empty()) throw input_error("no data rows");
  std::size_t cols = rows.front().size();
  std::size_t dim = has_weight_column ? cols - 1 : cols;
  if (dim < 1) throw input_error("no coordinate columns");
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  std::vector<double> weights;
  weights.reserve(rows.size());
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < dim; ++k) coords.push_back(row[k]);
    weights.push_back(has_weight_column ? row[dim] : 1.0);
  }
  return Dataset::from_points(dim, std::move(coords), std::move(weights));
}

Dataset read_points_csv(const std::string& path, bool has_weight_column) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  return read_points_csv(in, has_weight_column);
}

void write_points_csv(const std::string& path, const Dataset& data,
                      bool write_weight_column) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path);
  for (std::size_t k = 0; k < data.dim; ++k)
    out << (k ? "," : "") << "x_" << (k + 1);
  if (write_weight_column) out << ",weight";
  out << "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto p = data.point(i);
    for (std::size_t k = 0; k < data.dim; ++k)
      out << (k ? "," : "") << format_double(p[k]);
    if (write_weight_column) out << "," << format_double(data.weights[i]);
    out << "\n";
  }
}

std::vector<WeightedExemplar> read_exemplars_csv(const std::string& path,
                                                 std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  auto rows = read_numeric_rows(in);
  if (rows.empty()) throw input_error("no data rows");
  if (rows.front().size() != dim + 2)
    throw input_error("expected " + std::to_string(dim + 2) +
                      " columns in exemplar CSV");
  std::vector<WeightedExemplar> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out[i].position.assign(rows[i].begin(), rows[i].begin() + dim);
    out[i].weight = rows[i][dim];
    out[i].internal_distortion = rows[i][dim + 1];
    out[i].origin = i;
    if (!(out[i].weight > 0.0))
      throw input_error("nonpositive weight in exemplar CSV");
    if (out[i].internal_distortion < 0.0)
      throw input_error("negative internal distortion in exemplar CSV");
  }
  return out;
}

void write_exemplars_csv(const std::string& path,
                         std::span<const WeightedExemplar> points,
                         std::size_t dim) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path);
  for (std::size_t k = 0; k < dim; ++k)
    out << (k ? "," : "") << "x_" << (k + 1);
  out << ",weight,internal_distortion\n";
  for (const auto& e : points) {
    if (e.position.size() != dim)
      throw input_error("exemplar dimension mismatch");
    for (std::size_t k = 0; k < dim; ++k)
      out << (k ? "," : "") << format_double(e.position[k]);
    out << "," << format_double(e.weight) << ","
        << format_double(e.internal_distortion) << "\n";
  }
}

void write_assignment_csv(const std::string& path,
                          const std::vector<std::size_t>& assignment) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path);
  out << "point_index,exemplar_index\n";
  for (std::size_t i = 0; i < assignment.size(); ++i)
    out << i << "," << assignment[i] << "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write " + path);
  out << content;
}

}  // namespace hiap
