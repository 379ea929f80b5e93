#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace corpaudit::csv {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A header-keyed table. Lines starting with '#' before the header are kept as
// metadata comments ("# key: value" pairs are also parsed into `meta`).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::map<std::string, std::string> meta;

  std::optional<std::size_t> column(std::string_view name) const;
  // Throws CsvError when the column is absent.
  std::size_t require_column(std::string_view name) const;
};

std::vector<std::string> split_line(std::string_view line);
Table parse(std::istream& in, const std::string& source_name);
Table read_file(const std::string& path);

std::string quote(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace corpaudit::csv
