#include "corpaudit/csv.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace corpaudit::csv {

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::require_column(std::string_view name) const {
  auto idx = column(name);
  if (!idx) throw CsvError("missing column '" + std::string(name) + "'");
  return *idx;
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw CsvError("unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

Table parse(std::istream& in, const std::string& source_name) {
  Table table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (table.header.empty() && line[0] == '#') {
      std::string_view body(line);
      body.remove_prefix(1);
      const auto colon = body.find(':');
      if (colon != std::string_view::npos) {
        auto key = body.substr(0, colon);
        auto value = body.substr(colon + 1);
        while (!key.empty() && key.front() == ' ') key.remove_prefix(1);
        while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
        table.meta.emplace(std::string(key), std::string(value));
      }
      continue;
    }
    std::vector<std::string> fields;
    try {
      fields = split_line(line);
    } catch (const CsvError& e) {
      throw CsvError(source_name + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw CsvError(source_name + ":" + std::to_string(lineno) + ": expected " +
                     std::to_string(table.header.size()) + " fields, got " +
                     std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw CsvError(source_name + ": missing header");
  return table;
}

Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path);
  return parse(in, path);
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << quote(fields[i]);
  }
  out << '\n';
}

}  // namespace corpaudit::csv
