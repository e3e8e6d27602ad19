#include "counter.hpp"

void Counter::advance() {
  value_ += 1;
}

bool Counter::done() const {
  return value_ >= 10;
}
