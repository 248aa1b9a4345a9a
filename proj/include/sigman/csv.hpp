#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sigman::csv {

struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// A parsed CSV file whose header was checked against a fixed column set.
class Table {
 public:
  // Parses `text`; `source` names the file in error messages. Columns outside
  // required + optional are rejected, as are missing required columns.
  static Table parse(std::string_view text, std::string source,
                     const std::vector<std::string>& required,
                     const std::vector<std::string>& optional = {});
  static Table read(const std::string& path, const std::vector<std::string>& required,
                    const std::vector<std::string>& optional = {});

  const std::string& source() const { return source_; }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<Row>& rows() const { return rows_; }
  bool has_column(const std::string& name) const { return index_.count(name) > 0; }

  // Cell accessors; empty optional when the column is absent or the cell is blank.
  const std::string& at(const Row& row, const std::string& column) const;
  std::optional<std::string> get(const Row& row, const std::string& column) const;

  double number(const Row& row, const std::string& column) const;
  int integer(const Row& row, const std::string& column) const;

  [[noreturn]] void fail(const Row& row, const std::string& what) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::map<std::string, std::size_t> index_;
  std::vector<Row> rows_;
};

std::vector<std::vector<std::string>> split_records(std::string_view text,
                                                    std::vector<std::size_t>* lines = nullptr);

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Fixed-point rendering used by every report so output is byte-stable.
std::string fixed(double value, int decimals);
// Shortest text that parses back to the same double.
std::string exact(double value);

std::string read_file(const std::string& path);

}  // namespace sigman::csv
