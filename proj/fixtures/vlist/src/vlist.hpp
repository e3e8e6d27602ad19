#pragma once

#include <vector>

class VList {
 public:
  void add(int item);
  int size() const;

 private:
  void incrementVersion();

  std::vector<int> elements_;
  int version_ = 0;
};
