#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hiap/geometry.hpp"
#include "hiap/wap.hpp"

namespace hiap {

// Point CSV: one row per point, d numeric columns plus an optional trailing
// weight column; an optional header row is auto-detected by a non-numeric
// first field.
Dataset read_points_csv(const std::string& path, bool has_weight_column);
Dataset read_points_csv(std::istream& in, bool has_weight_column);

void write_points_csv(const std::string& path, const Dataset& data,
                      bool write_weight_column = false);

// Weighted exemplar interchange: x_1,...,x_d,weight,internal_distortion.
std::vector<WeightedExemplar> read_exemplars_csv(const std::string& path,
                                                 std::size_t dim);
void write_exemplars_csv(const std::string& path,
                         std::span<const WeightedExemplar> points,
                         std::size_t dim);

void write_assignment_csv(const std::string& path,
                          const std::vector<std::size_t>& assignment);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Full-precision double formatting shared by all CSV writers.
std::string format_double(double x);

}  // namespace hiap
