#include "stack.hpp"

#include <numeric>

void IntStack::push(int v) {
  items_.push_back(v);
}

void IntStack::pop() {
  items_.pop_back();
}

int IntStack::top() const {
  return items_.back();
}

int IntStack::size() const {
  return static_cast<int>(items_.size());
}

bool IntStack::empty() const {
  return items_.empty();
}

int IntStack::sum() const {
  return std::accumulate(items_.begin(), items_.end(), 0);
}
