#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace shop {
namespace inventory {

class Catalog {
 public:
  void add(const std::string& name);
  void clear();
  bool contains(const std::string& name) const;
  long count() const;
  double averageLength() const;
  char initial(std::size_t i) const;
  std::string first() const;
  const std::string* find(const std::string& name) const;
  const std::string& at(std::size_t i) const;
  std::vector<std::string> sorted() const;

 private:
  std::vector<std::string> items_;
};

}  // namespace inventory
}  // namespace shop
