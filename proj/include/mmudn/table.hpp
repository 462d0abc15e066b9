#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace mmudn {

enum class TableFormat { Csv, Json };

/// Command output: a header block (command, resolved config, derived
/// values) followed by rows of cells.
struct Table {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> derived;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::size_t column(const std::string& name) const;
  const std::string& cell(std::size_t row, const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

/// Shortest decimal text that round-trips the double.
std::string format_number(double v);
std::string format_bool(bool v);

void write_table(std::ostream& out, const Table& table, TableFormat format);
/// Reads either format; JSON is detected by a leading '{'.
Table read_table(std::istream& in);

}  // namespace mmudn
