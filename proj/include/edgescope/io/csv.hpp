#pragma once

#include <string>
#include <vector>

namespace edgescope {

/// Shortest round-trip style formatting for doubles ("%.17g"); infinities
/// and NaN print as inf/-inf/nan.  Deterministic across runs.
std::string format_double(double v);

/// RFC-4180 quoting: fields containing comma, quote, CR or LF are wrapped in
/// double quotes with embedded quotes doubled.
std::string csv_escape(const std::string& field);

/// One table cell: either a preformatted string or a number.
struct CsvCell {
    std::string text;

    CsvCell(std::string s) : text(std::move(s)) {}            // NOLINT(google-explicit-constructor)
    CsvCell(const char* s) : text(s) {}                        // NOLINT(google-explicit-constructor)
    CsvCell(double v) : text(format_double(v)) {}              // NOLINT(google-explicit-constructor)
    CsvCell(long v) : text(std::to_string(v)) {}               // NOLINT(google-explicit-constructor)
    CsvCell(int v) : text(std::to_string(v)) {}                // NOLINT(google-explicit-constructor)
    CsvCell(unsigned long long v) : text(std::to_string(v)) {} // NOLINT(google-explicit-constructor)
};

/// Write a CSV file with a header row; throws std::runtime_error on I/O failure.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<CsvCell>>& rows);

/// Write arbitrary text to a file, creating parent directories.
void write_text_file(const std::string& path, const std::string& content);

/// Read a whole file; throws std::runtime_error if unreadable.
std::string read_text_file(const std::string& path);

}  // namespace edgescope
