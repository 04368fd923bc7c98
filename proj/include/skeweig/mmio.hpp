#pragma once

// Matrix Market reading and writing.
//
// Skew matrices are read from
//   coordinate real skew-symmetric   (strictly lower entries)
//   array      real skew-symmetric   (strictly lower part, column by column)
//   coordinate real general          (validated to be exactly skew)
//   array      real general          (validated to be exactly skew)
// and written as coordinate real skew-symmetric with every strictly lower
// entry listed. Complex matrices use array complex general. Indices are
// 1-based. Doubles are written in shortest round-trip form, so a write/read
// cycle is bit exact.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "skeweig/matrix.hpp"
#include "skeweig/types.hpp"

namespace skeweig::io {

DenseSkewMatrix read_skew_matrix(std::istream& in);
DenseSkewMatrix read_skew_matrix(const std::filesystem::path& path);
void write_skew_matrix(std::ostream& out, const DenseSkewMatrix& a);
void write_skew_matrix(const std::filesystem::path& path, const DenseSkewMatrix& a);

/// Reads array/coordinate complex general; real general files are accepted
/// with a zero imaginary plane.
ComplexPlanes read_complex_matrix(std::istream& in);
ComplexPlanes read_complex_matrix(const std::filesystem::path& path);
void write_complex_matrix(std::ostream& out, const ComplexPlanes& m);
void write_complex_matrix(const std::filesystem::path& path, const ComplexPlanes& m);

/// Plain text, one value per line; blank lines and '#' comments skipped.
std::vector<double> read_values(const std::filesystem::path& path);
void write_values(const std::filesystem::path& path, std::span<const double> values);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace skeweig::io
