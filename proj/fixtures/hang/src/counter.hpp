#pragma once

class Counter {
 public:
  void advance();
  int value() const { return value_; }
  bool done() const;

 private:
  int value_ = 0;
};
