#pragma once

#include <vector>

class VList {
 public:
  void add(int item);
  int size() const;
  int version() const { return version_; }

 private:
  void incrementVersion();

  std::vector<int> elements_;
  int version_ = 0;
};
