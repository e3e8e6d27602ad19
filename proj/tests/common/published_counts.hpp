#pragma once

#include <cstddef>
#include <string_view>

namespace pseudotest::testing {

struct PublishedRow {
  std::string_view project;
  std::size_t methods, covered;
  int c_rate_percent;
  std::size_t mua, pseudo;
  int ps_rate_percent;
};

// Per-project counts and rendered rates as published for the 21 subjects.
inline constexpr PublishedRow kPublishedCounts[] = {
    {"authzforce", 697, 325, 47, 291, 13, 4},
    {"aws-sdk-java", 177449, 2314, 1, 1800, 224, 12},
    {"commons-cli", 237, 181, 76, 141, 2, 1},
    {"commons-codec", 536, 449, 84, 426, 12, 3},
    {"commons-collections", 2729, 1270, 47, 1232, 40, 3},
    {"commons-io", 875, 664, 76, 641, 29, 5},
    {"commons-lang", 2421, 1939, 80, 1889, 47, 2},
    {"flink-core", 4133, 1886, 46, 1814, 100, 6},
    {"gson", 624, 499, 80, 477, 10, 2},
    {"jaxen", 958, 616, 64, 569, 11, 2},
    {"jfreechart", 7289, 3639, 50, 3496, 476, 14},
    {"jgit", 6137, 3702, 60, 2539, 296, 12},
    {"joda-time", 3374, 2783, 82, 2526, 82, 3},
    {"jopt-simple", 298, 265, 89, 256, 2, 1},
    {"jsoup", 1110, 844, 76, 751, 28, 4},
    {"sat4j-core", 2218, 613, 28, 585, 143, 24},
    {"pdfbox", 8164, 2418, 30, 2241, 473, 21},
    {"scifio", 3269, 895, 27, 158, 72, 46},
    {"spoon", 4470, 2976, 67, 2938, 213, 7},
    {"urbanairship", 2933, 2140, 73, 1989, 28, 1},
    {"xwiki-rendering", 5002, 2232, 45, 2049, 239, 12},
};

}  // namespace pseudotest::testing
