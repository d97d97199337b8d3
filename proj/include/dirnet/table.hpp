#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace dirnet {

enum class OutputFormat { kCsv, kJson };

/// Result table with provenance. Every emitter writes the same cells.
struct Table {
  using Cell = std::variant<double, std::int64_t, std::string>;

  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// Header row plus RFC 4180 quoting; doubles with 17 significant digits. The
/// metadata object goes on a single leading "# metadata: {...}" line.
std::string to_csv(const Table& table);

/// {"metadata": {...}, "rows": [{column: value, ...}, ...]}; NaN and
/// infinities become null.
std::string to_json(const Table& table);

std::string render(const Table& table, OutputFormat format);

/// Writes to path (or stdout for "-" / empty). Throws IoError with the path.
void write_table(const Table& table, OutputFormat format,
                 const std::filesystem::path& path);

/// Writes text to a file, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

OutputFormat parse_format(const std::string& name);

/// Canonical float formatting used by the CSV emitter.
std::string format_double(double value);

}  // namespace dirnet
