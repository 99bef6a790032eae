#pragma once

#include "mwdisc/table.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace mwdisc {

enum class MatrixFormat { Csv, MatrixMarket };

/// "csv", or "mm" / "matrixmarket". Throws InvalidArgument.
MatrixFormat parse_format(std::string_view name);

/// Dense CSV without header, or MatrixMarket "coordinate real general" with
/// 1-based indices and repeated coordinates summed. Throws ParseError (with
/// line and column), RaggedRows, NonNumeric.
Matrix parse_matrix_text(std::string_view text, MatrixFormat format);

/// Throws Io when the file cannot be read.
Matrix parse_matrix(const std::filesystem::path& path, MatrixFormat format);

/// Every value printed with 17 significant digits.
std::string format_matrix(const Matrix& m, MatrixFormat format);

/// Writes to a temporary file next to `path`, then renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace mwdisc
