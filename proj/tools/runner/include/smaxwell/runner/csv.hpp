#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace smaxwell::runner {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest decimal with 17 significant digits; parses back to the same bits.
std::string format_double(double value);
std::string format_cell(const Cell& cell);

/// UTF-8, header row, '.' decimal point, LF endings. Throws
/// std::invalid_argument on ragged rows and std::runtime_error (with the
/// path) when the file cannot be written.
void emit_csv(const Table& table, const std::filesystem::path& path);

/// Splits a file written by emit_csv back into string cells, header included.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

/// Strict full-string parse; throws std::invalid_argument.
double parse_double(const std::string& text);

}  // namespace smaxwell::runner
