#include "sigman/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sigman/domain.hpp"

namespace sigman::csv {

namespace {

std::string trim_copy(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<std::vector<std::string>> split_records(std::string_view text,
                                                    std::vector<std::size_t>* lines) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool quoted = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  auto end_field = [&]() {
    record.push_back(quoted ? field : trim_copy(field));
    field.clear();
    quoted = false;
  };
  auto end_record = [&]() {
    end_field();
    const bool blank = record.size() == 1 && record[0].empty();
    if (!blank) {
      records.push_back(std::move(record));
      if (lines) lines->push_back(record_line);
    }
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && trim_copy(field).empty()) {
      field.clear();
      in_quotes = true;
      quoted = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_record();
      ++line;
      record_line = line;
    } else if (c != '\r' || (i + 1 < text.size() && text[i + 1] != '\n')) {
      field.push_back(c);
    }
  }
  if (in_quotes) throw ParseError("<csv>", line, "unterminated quoted field");
  if (!field.empty() || !record.empty()) end_record();
  return records;
}

Table Table::parse(std::string_view text, std::string source,
                   const std::vector<std::string>& required,
                   const std::vector<std::string>& optional) {
  Table t;
  t.source_ = std::move(source);
  std::vector<std::size_t> lines;
  std::vector<std::vector<std::string>> records;
  try {
    records = split_records(text, &lines);
  } catch (const ParseError& e) {
    throw ParseError(t.source_, e.line(), "unterminated quoted field");
  }
  if (records.empty()) {
    if (!required.empty()) throw ParseError(t.source_, 1, "missing header row");
    return t;
  }
  t.header_ = records.front();
  for (std::size_t i = 0; i < t.header_.size(); ++i) {
    const std::string& name = t.header_[i];
    const bool known = std::find(required.begin(), required.end(), name) != required.end() ||
                       std::find(optional.begin(), optional.end(), name) != optional.end();
    if (!known) throw ParseError(t.source_, lines.front(), "unknown column '" + name + "'");
    if (!t.index_.emplace(name, i).second) {
      throw ParseError(t.source_, lines.front(), "duplicate column '" + name + "'");
    }
  }
  for (const auto& name : required) {
    if (!t.index_.count(name)) {
      throw ParseError(t.source_, lines.front(), "missing required column '" + name + "'");
    }
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header_.size()) {
      throw ParseError(t.source_, lines[r],
                       "expected " + std::to_string(t.header_.size()) + " fields, found " +
                           std::to_string(records[r].size()));
    }
    t.rows_.push_back(Row{lines[r], std::move(records[r])});
  }
  return t;
}

Table Table::read(const std::string& path, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional) {
  return parse(read_file(path), path, required, optional);
}

const std::string& Table::at(const Row& row, const std::string& column) const {
  auto it = index_.find(column);
  if (it == index_.end()) fail(row, "no column '" + column + "'");
  return row.fields[it->second];
}

std::optional<std::string> Table::get(const Row& row, const std::string& column) const {
  auto it = index_.find(column);
  if (it == index_.end() || row.fields[it->second].empty()) return std::nullopt;
  return row.fields[it->second];
}

double Table::number(const Row& row, const std::string& column) const {
  const std::string& s = at(row, column);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    fail(row, "column '" + column + "' is not a number: '" + s + "'");
  }
  return value;
}

int Table::integer(const Row& row, const std::string& column) const {
  const std::string& s = at(row, column);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    fail(row, "column '" + column + "' is not an integer: '" + s + "'");
  }
  return value;
}

void Table::fail(const Row& row, const std::string& what) const {
  throw ParseError(source_, row.line, what);
}

std::string escape(std::string_view field) {
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
    out << escape(fields[i]);
  }
  out << '\n';
}

std::string fixed(double value, int decimals) {
  if (value == 0.0) value = 0.0;  // folds -0.0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  // "-0.00" after rounding a tiny negative
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string exact(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sigman::csv
