#pragma once

#include <vector>

#include "fsc/quadrature.hpp"

namespace fsc {

// Values of a square-integrable function of the random input at the nodes of a carrier.
class RandomFunction {
 public:
  RandomFunction() = default;
  RandomFunction(NodeSetPtr carrier, std::vector<double> values);

  // Evaluates f at every node.
  static RandomFunction from(NodeSetPtr carrier, const std::function<double(const double*)>& f);
  static RandomFunction constant(NodeSetPtr carrier, double c);

  const NodeSetPtr& carrier() const { return carrier_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t q) const { return values_[q]; }
  const double* data() const { return values_.data(); }

  double mean() const;

  RandomFunction operator+(const RandomFunction& o) const;
  RandomFunction operator-(const RandomFunction& o) const;
  RandomFunction operator*(const RandomFunction& o) const;
  RandomFunction operator*(double c) const;

 private:
  NodeSetPtr carrier_;
  std::vector<double> values_;
};

// <f, g> on the shared carrier, summed in node order.
double inner(const RandomFunction& f, const RandomFunction& g);
// Same, additionally checking that both functions live on `nodes`.
double inner(const RandomFunction& f, const RandomFunction& g, const NodeSetPtr& nodes);
void require_same_carrier(const NodeSetPtr& a, const NodeSetPtr& b);

}  // namespace fsc
