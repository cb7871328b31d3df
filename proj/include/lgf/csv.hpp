#pragma once

/// @file csv.hpp
/// @brief Diagnostics CSV: comma separated, '.' decimal, 17 significant
/// digits, header row from record_columns().

#include <filesystem>
#include <fstream>
#include <string>

#include "lgf/diagnostics.hpp"

namespace lgf {

/// "%.17g" in the C locale.
std::string format_real(double v);

std::string csv_header();
std::string csv_row(const DiagnosticsRecord& r);

/// Appends records to a file, flushing after each row so partial runs leave
/// readable output.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void write(const DiagnosticsRecord& r);
  /// Final line "# TRUNCATED: <reason>" marking an aborted run.
  void mark_truncated(const std::string& reason);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

}  // namespace lgf
