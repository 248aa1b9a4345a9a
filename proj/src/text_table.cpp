#include "sigman/text_table.hpp"

#include <algorithm>
#include <ostream>

namespace sigman::text {

void Table::render(std::ostream& out) const {
  std::vector<std::size_t> width(header_.size(), 0);
  auto measure = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  };
  measure(header_);
  for (const auto& r : rows_) measure(r);

  std::size_t line = 0;
  for (std::size_t w : width) line += w + 2;

  auto emit = [&](const std::vector<std::string>& row) {
    std::string text;
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string cell = i < row.size() ? row[i] : "";
      const std::string pad(width[i] - cell.size(), ' ');
      if (i > 0) text += "  ";
      text += i == 0 ? cell + pad : pad + cell;
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out << text << '\n';
  };

  emit(header_);
  out << std::string(line > 2 ? line - 2 : 0, '-') << '\n';
  for (const auto& r : rows_) {
    if (r.empty()) {
      out << std::string(line > 2 ? line - 2 : 0, '-') << '\n';
    } else {
      emit(r);
    }
  }
}

}  // namespace sigman::text
