#include "lgf/csv.hpp"

#include <charconv>

#include "lgf/errors.hpp"

namespace lgf {

std::string format_real(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_header() {
  std::string line;
  for (const auto& c : record_columns()) {
    if (!line.empty()) line += ',';
    line += c;
  }
  return line;
}

std::string csv_row(const DiagnosticsRecord& r) {
  const auto values = record_values(r);
  std::string line = std::to_string(r.step);
  for (std::size_t i = 1; i < values.size(); ++i) {
    line += ',';
    line += format_real(values[i]);
  }
  return line;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::trunc), path_(path) {
  if (!out_) throw FormatError("cannot open '" + path.string() + "' for writing");
  out_ << csv_header() << '\n' << std::flush;
}

void CsvWriter::write(const DiagnosticsRecord& r) {
  out_ << csv_row(r) << '\n' << std::flush;
  if (!out_) throw FormatError("write to '" + path_.string() + "' failed");
}

void CsvWriter::mark_truncated(const std::string& reason) {
  std::string one_line = reason;
  for (char& c : one_line) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  out_ << "# TRUNCATED: " << one_line << '\n' << std::flush;
}

}  // namespace lgf
