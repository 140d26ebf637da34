#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sgw::io {

/// Shortest text that reads back to the same double (17 significant digits).
std::string format_double(double x);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never see a partial file. Creates missing parent directories.
void atomic_write(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Plain CSV: one header line of column names, then one line per row.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws FormatError if absent.
  std::size_t column(std::string_view name) const;
};

/// Reads a file written by write_table. Lines starting with '#' are skipped.
Table read_table(const std::filesystem::path& path);

}  // namespace sgw::io
