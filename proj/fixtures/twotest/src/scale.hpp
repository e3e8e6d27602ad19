#pragma once

namespace scale {

int twice(int x);
int thrice(int x);

}  // namespace scale
