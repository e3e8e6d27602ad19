#include "coin.hpp"

#include <random>

int flip(unsigned seed) {
  std::mt19937 gen(seed);
  return static_cast<int>(gen() & 1u);
}
