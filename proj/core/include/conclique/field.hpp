#pragma once

#include <cstdint>
#include <vector>

namespace conclique {

// One configuration of the random field: a value per site.
// Binary families store {0.0, 1.0}.
struct Field {
  std::vector<double> values;

  Field() = default;
  explicit Field(int n, double fill = 0.0) : values(static_cast<std::size_t>(n), fill) {}
  int n() const { return static_cast<int>(values.size()); }
  double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
};

}  // namespace conclique
