#pragma once
#include <string>
#include <vector>

namespace vhom {

struct SelftestRow {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast invariant checks across all modules (a few seconds at most).
std::vector<SelftestRow> run_selftest();

/// Fixed-width pass/fail table, one row per check plus a summary line.
std::string format_selftest(const std::vector<SelftestRow> &rows);

} // namespace vhom
