#pragma once

// Test-only brute-force oracles, independent of the library internals.

#include <cstddef>
#include <string>
#include <vector>

namespace oracle {

struct Point {
  std::string user;
  std::vector<double> coords;
};

// Max-is-better dominance written from scratch.
inline bool dominated_by(const Point& a, const Point& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    if (b.coords[i] < a.coords[i]) return false;
    if (b.coords[i] > a.coords[i]) strict = true;
  }
  return strict;
}

// Layered Pareto decomposition by repeated pairwise scans.
inline std::vector<std::vector<Point>> layered_pareto(std::vector<Point> points) {
  std::vector<std::vector<Point>> layers;
  while (!points.empty()) {
    std::vector<Point> layer;
    std::vector<Point> rest;
    for (std::size_t i = 0; i < points.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
        if (i != j && dominated_by(points[i], points[j])) dominated = true;
      }
      (dominated ? rest : layer).push_back(points[i]);
    }
    layers.push_back(std::move(layer));
    points = std::move(rest);
  }
  return layers;
}

}  // namespace oracle
