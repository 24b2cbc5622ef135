// Acceptance suite: one test case per shipping criterion, each printing a
// single PASS/FAIL line. Run via ctest (test name "acceptance") or directly.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <string>

namespace {
const std::string kDataDir = GNNCOLOR_DATA_DIR;

void report_line(int criterion, bool pass, const std::string& detail) {
  std::printf("[criterion %02d] %s  %s\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
}
}  // namespace

TEST_CASE("placeholder") { CHECK(kDataDir.size() > 0); (void)report_line; }
