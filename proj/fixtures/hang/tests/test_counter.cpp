#include "counter.hpp"
#include "doctest.h"

TEST_CASE("counts to ten") {
  Counter c;
  while (c.value() < 10) c.advance();
  CHECK(c.done());
}

TEST_CASE("fresh counter is not done") {
  Counter c;
  CHECK_FALSE(c.done());
}
