#pragma once

#include <filesystem>
#include <string_view>

namespace pseudotest::testing {

inline std::filesystem::path fixture(std::string_view name) {
  return std::filesystem::path(PSEUDOTEST_TEST_FIXTURES) / name;
}

inline std::filesystem::path support_dir() { return PSEUDOTEST_TEST_SUPPORT; }
inline std::filesystem::path cli_binary() { return PSEUDOTEST_TEST_CLI; }
inline std::filesystem::path oracle_script() { return PSEUDOTEST_TEST_ORACLE; }
inline std::filesystem::path python() { return PSEUDOTEST_TEST_PYTHON; }

// Fixtures whose baseline is green, in the order the acceptance run visits them.
inline constexpr std::string_view kGreenFixtures[] = {"vlist", "vlist_asserted", "anyofany", "hang",
                                                      "asserted", "catalog", "twotest", "empty"};

}  // namespace pseudotest::testing
