#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace clms {

/// A numeric cell; an empty cell is written as the literal "invalid".
using Cell = std::optional<double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(const std::string& name) const;
};

/// 17 significant digits so values survive a text round trip exactly.
std::string format_number(double v);

/// Comma separated, header row, LF line endings.
std::string to_csv(const Table& table);
void write_csv(const std::filesystem::path& path, const Table& table);

Table parse_csv(const std::string& text);
Table read_csv(const std::filesystem::path& path);

}  // namespace clms
