#include "mmudn/table.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include "json.hpp"
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mmudn/errors.hpp"

namespace mmudn {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_full_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  return ec == std::errc() && ptr == end;
}

}  // namespace

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match the column count");
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw ParameterError("no column named " + name);
}

const std::string& Table::cell(std::size_t row, const std::string& name) const { return rows.at(row).at(column(name)); }

double Table::number(std::size_t row, const std::string& name) const {
  double v = 0.0;
  if (!parse_full_double(cell(row, name), v)) throw ParameterError("column " + name + " is not numeric");
  return v;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_bool(bool v) { return v ? "true" : "false"; }

void write_table(std::ostream& out, const Table& t, TableFormat format) {
  if (format == TableFormat::Csv) {
    out << "# command=" << t.command << '\n';
    for (const auto& [k, v] : t.config) out << "# config." << k << '=' << v << '\n';
    for (const auto& [k, v] : t.derived) out << "# derived." << k << '=' << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
    return;
  }
  nlohmann::ordered_json j;
  j["command"] = t.command;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.config) j["config"][k] = v;
  j["derived"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.derived) j["derived"][k] = v;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      double v = 0.0;
      if (parse_full_double(cell, v) && std::isfinite(v)) r.push_back(v);
      else r.push_back(cell);
    }
    j["rows"].push_back(std::move(r));
  }
  out << j.dump(2) << '\n';
}

Table read_table(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Table t;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto j = nlohmann::ordered_json::parse(text);
    t.command = j.at("command").get<std::string>();
    for (const auto& [k, v] : j.at("config").items()) t.config.emplace_back(k, v.get<std::string>());
    for (const auto& [k, v] : j.at("derived").items()) t.derived.emplace_back(k, v.get<std::string>());
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      std::vector<std::string> row;
      for (const auto& cell : r) row.push_back(cell.is_number() ? format_number(cell.get<double>()) : cell.get<std::string>());
      t.add_row(std::move(row));
    }
    return t;
  }

  std::istringstream lines(text);
  std::string line;
  bool header_done = false;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_done && line.rfind("# ", 0) == 0) {
      const std::string body = line.substr(2);
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "command") t.command = value;
      else if (key.rfind("config.", 0) == 0) t.config.emplace_back(key.substr(7), value);
      else if (key.rfind("derived.", 0) == 0) t.derived.emplace_back(key.substr(8), value);
      continue;
    }
    if (!header_done) {
      t.columns = split(line, ',');
      header_done = true;
      continue;
    }
    auto row = split(line, ',');
    if (row.size() != t.columns.size()) throw ParameterError("table row width does not match its header");
    t.rows.push_back(std::move(row));
  }
  if (!header_done) throw ParameterError("table has no column header");
  return t;
}

}  // namespace mmudn
