#pragma once

#include <string>
#include <vector>

namespace qsure::report {

// Minimal monospace table with left-aligned, padded columns.
class Table {
 public:
  void header(std::vector<std::string> cells);
  void row(std::vector<std::string> cells);
  std::string render() const;

 private:
  std::vector<std::vector<std::string>> rows_;
  bool has_header_ = false;
};

}  // namespace qsure::report
