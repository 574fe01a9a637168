#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace bitoss {

/// Integer tuple: coin faces, grid cells, class labels. std::vector's
/// lexicographic order is the canonical point order everywhere.
using Point = std::vector<int>;

/// Componentwise sum; the monoid operation on grids.
Point add_points(const Point& a, const Point& b);

/// Coordinate projection as a one-element point.
inline Point project(const Point& p, std::size_t i) { return Point{p.at(i)}; }

/// All bit tuples {0,1}^n in lexicographic order.
std::vector<Point> bit_tuples(unsigned n);

/// The grid {0,...,k}^n in lexicographic order.
std::vector<Point> grid_points(unsigned k, unsigned n);

std::string to_ket_label(const Point& p);

}  // namespace bitoss
