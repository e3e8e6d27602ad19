#include "anyofany.hpp"

#include <stdexcept>

void AnyOfAny::checkNumberOfArgs(int numInputs) {
  ++checks_;
  audit(numInputs);
  if (numInputs < 2) {
    missing_ = 2 - numInputs;
    throw std::invalid_argument("too few arguments");
  }
}

void AnyOfAny::audit(int numInputs) {
  seen_.push_back(numInputs);
}

bool AnyOfAny::evaluate(const std::vector<int>& args) {
  checkNumberOfArgs(static_cast<int>(args.size()));
  for (int a : args) {
    if (a) return true;
  }
  return false;
}
