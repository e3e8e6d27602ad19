#pragma once

#include <vector>

class AnyOfAny {
 public:
  bool evaluate(const std::vector<int>& args);
  void checkNumberOfArgs(int numInputs);

 private:
  void audit(int numInputs);

  int checks_ = 0;
  int missing_ = 0;
  std::vector<int> seen_;
};
