#include "bitoss/point.hpp"

#include <stdexcept>

namespace bitoss {

Point add_points(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add_points: arity mismatch");
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

std::vector<Point> bit_tuples(unsigned n) { return grid_points(1, n); }

std::vector<Point> grid_points(unsigned k, unsigned n) {
  std::vector<Point> out;
  Point cur(n, 0);
  while (true) {
    out.push_back(cur);
    int i = static_cast<int>(n) - 1;
    while (i >= 0 && cur[i] == static_cast<int>(k)) cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

std::string to_ket_label(const Point& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s;
}

}  // namespace bitoss
