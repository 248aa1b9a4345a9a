#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sigman::text {

// Plain-text table: first column left-aligned, the rest right-aligned.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  // A dashed line spanning every column.
  void rule() { rows_.push_back({}); }

  void render(std::ostream& out) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace sigman::text
