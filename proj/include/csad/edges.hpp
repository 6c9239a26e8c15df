#pragma once

#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "csad/errors.hpp"
#include "csad/numerics.hpp"

namespace csad {

/// Unordered node pair, stored with first < second.
struct Edge {
  std::size_t first = 0;
  std::size_t second = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Set of undirected edges over nodes [0, p). No self-loops.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t p) : p_(p) {}

  void insert(std::size_t i, std::size_t j) {
    if (i == j) throw InvalidArgument("EdgeSet: self-loop at node " + std::to_string(i));
    if (i > j) std::swap(i, j);
    if (j >= p_) {
      throw InvalidArgument("EdgeSet: node " + std::to_string(j) + " out of range for p = " +
                            std::to_string(p_));
    }
    edges_.insert({i, j});
  }

  bool contains(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return edges_.count({i, j}) != 0;
  }

  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }
  std::size_t nodes() const noexcept { return p_; }

  auto begin() const { return edges_.begin(); }
  auto end() const { return edges_.end(); }

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

 private:
  std::size_t p_ = 0;
  std::set<Edge> edges_;
};

/// Off-diagonal pairs {i, j}, i < j, with |m(i, j)| > threshold.
inline EdgeSet edge_set(const SymMatrix& m, double threshold = 1e-6) {
  if (!(threshold >= 0.0)) throw InvalidArgument("edge_set: threshold must be >= 0");
  EdgeSet out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = i + 1; j < m.dim(); ++j) {
      if (std::abs(m(i, j)) > threshold) out.insert(i, j);
    }
  }
  return out;
}

}  // namespace csad
