#include "calc.hpp"
#include "doctest.h"

TEST_CASE("add works") {
  CHECK(add(2, 2) == 4);
}

TEST_CASE("mul of two and two is five") {
  CHECK(mul(2, 2) == 5);
}
