#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cowichan/grid.hpp"

namespace cowichan {

// Text formats used when is_bench is off. Matrices and masks start with a
// "nrows ncols" line followed by one space-separated row per line (masks use
// 0/1); point lists start with "nelts" followed by "row col" lines; real
// vectors start with "n" followed by one value per line. Reals are written
// with 17 significant digits so they round-trip exactly.

void write_int_matrix(std::ostream& out, const IntMatrix& m);
IntMatrix read_int_matrix(std::istream& in, const std::string& context = "int matrix");

void write_mask(std::ostream& out, const Mask& m);
Mask read_mask(std::istream& in, const std::string& context = "mask");

void write_point_list(std::ostream& out, const PointList& pts);
PointList read_point_list(std::istream& in, const std::string& context = "point list");

void write_real_matrix(std::ostream& out, const RealMatrix& m);
RealMatrix read_real_matrix(std::istream& in, const std::string& context = "real matrix");

void write_real_vector(std::ostream& out, const RealVector& v);
RealVector read_real_vector(std::istream& in, const std::string& context = "real vector");

/// %.17g, the shortest form that still round-trips an IEEE double.
std::string format_real(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace cowichan
