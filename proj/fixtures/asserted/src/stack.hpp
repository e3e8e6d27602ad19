#pragma once

#include <vector>

class IntStack {
 public:
  void push(int v);
  void pop();
  int top() const;
  int size() const;
  bool empty() const;
  int sum() const;

 private:
  std::vector<int> items_;
};
