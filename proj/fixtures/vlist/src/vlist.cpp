#include "vlist.hpp"

void VList::add(int item) {
  elements_.push_back(item);
  incrementVersion();
}

void VList::incrementVersion() {
  version_++;
}

int VList::size() const {
  return static_cast<int>(elements_.size());
}
