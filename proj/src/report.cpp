#include "qsure/report.hpp"

namespace qsure::report {

void Table::header(std::vector<std::string> cells) {
  rows_.insert(rows_.begin(), std::move(cells));
  has_header_ = true;
}

void Table::row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

std::string Table::render() const {
  std::vector<std::size_t> widths;
  for (const auto& r : rows_) {
    if (widths.size() < r.size()) widths.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i].size() > widths[i]) widths[i] = r[i].size();
  }
  std::string out;
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const auto& r = rows_[k];
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += r[i];
      if (i + 1 < r.size()) line.append(widths[i] - r[i].size() + 2, ' ');
    }
    out += line + "\n";
    if (k == 0 && has_header_) {
      std::string rule;
      for (std::size_t i = 0; i < widths.size(); ++i) {
        rule.append(widths[i], '-');
        if (i + 1 < widths.size()) rule.append(2, ' ');
      }
      out += rule + "\n";
    }
  }
  return out;
}

}  // namespace qsure::report
