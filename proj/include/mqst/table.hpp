#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace mqst {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Column-named records, emitted as CSV (header row, 17 significant digits)
/// or as a JSON array of objects with the same field names.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

std::string format_double(double value);

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);

}  // namespace mqst
