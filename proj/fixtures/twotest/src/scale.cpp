#include "scale.hpp"

namespace scale {

int twice(int x) {
  return 2 * x;
}

int thrice(int x) {
  return 3 * x;
}

}  // namespace scale
