#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "fsc/distributions.hpp"

namespace fsc {

enum class NodeKind { GaussFullGrid, MonteCarlo, Reweighted };

// Immutable set of integration nodes in R^d with positive weights.
class NodeSet {
 public:
  NodeSet(std::size_t dim, std::vector<double> points, std::vector<double> weights, NodeKind kind);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  NodeKind kind() const { return kind_; }
  const double* point(std::size_t q) const { return points_.data() + q * dim_; }
  double coord(std::size_t q, std::size_t i) const { return points_[q * dim_ + i]; }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double> coordinate(std::size_t i) const;

 private:
  std::size_t dim_;
  std::vector<double> points_;
  std::vector<double> weights_;
  NodeKind kind_;
};

using NodeSetPtr = std::shared_ptr<const NodeSet>;

// Gauss rule of n points for the probability law `dist`, weights summing to 1.
NodeSetPtr gauss_rule(const Distribution& dist, int n);

// Cartesian product; the first rule varies slowest. At most three factors.
NodeSetPtr tensor_grid(const std::vector<NodeSetPtr>& rules);

// Gauss full grid for a product measure with the given per-axis point counts.
NodeSetPtr gauss_grid(const ProductMeasure& measure, const std::vector<int>& points_per_dim);

NodeSetPtr mc_nodes(const ProductMeasure& measure, std::size_t count, std::uint64_t seed);

// Multiplies each weight by factor(point) and renormalizes to a probability rule.
NodeSetPtr reweight(const NodeSet& base, const std::function<double(const double*)>& factor);

// Default per-axis Gauss point counts by law: 100 uniform, 80 beta, 140 gamma, 110 normal.
int default_gauss_points(const Distribution& dist);

// Weighted sum in node order.
double weighted_sum(const double* f, const double* g, const std::vector<double>& w);
double weighted_sum(const double* f, const std::vector<double>& w);

}  // namespace fsc
