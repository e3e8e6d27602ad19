#include "catalog.hpp"

#include <algorithm>

namespace shop {
namespace inventory {

void Catalog::add(const std::string& name) {
  items_.push_back(name);
}

void Catalog::clear() {
  items_.clear();
}

bool Catalog::contains(const std::string& name) const {
  return std::find(items_.begin(), items_.end(), name) != items_.end();
}

long Catalog::count() const {
  return static_cast<long>(items_.size());
}

double Catalog::averageLength() const {
  if (items_.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : items_) total += s.size();
  return total / items_.size();
}

char Catalog::initial(std::size_t i) const {
  return items_.at(i).empty() ? '?' : items_.at(i)[0];
}

std::string Catalog::first() const {
  return items_.empty() ? std::string() : items_.front();
}

const std::string* Catalog::find(const std::string& name) const {
  for (const auto& s : items_) {
    if (s == name) return &s;
  }
  return nullptr;
}

const std::string& Catalog::at(std::size_t i) const {
  return items_.at(i);
}

std::vector<std::string> Catalog::sorted() const {
  std::vector<std::string> out = items_;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace inventory
}  // namespace shop
