#pragma once

#include <string>
#include <vector>

#include "fsc/distributions.hpp"
#include "fsc/rfs.hpp"

namespace fsc {

// Multi-indices with |k| <= p, by total degree and then in descending lexicographic order.
std::vector<std::vector<int>> gpc_multi_indices(std::size_t d, int p);
std::size_t gpc_size(std::size_t d, int p);

// Products of monic univariate polynomials orthogonal under each factor of `measure`.
// On Monte Carlo nodes the products are only approximately orthogonal, so they are passed
// through Gram-Schmidt in the same order.
Basis gpc_basis(const ProductMeasure& measure, int p, const NodeSetPtr& nodes);

// Monic orthogonal polynomial values p_0..p_deg at x.
std::vector<double> monic_orthogonal_values(const Distribution& dist, int deg, double x);

double mean(const std::vector<double>& modes, const Basis& basis);
double variance(const std::vector<double>& modes, const Basis& basis);
RandomFunction reconstruct(const std::vector<double>& modes, const Basis& basis);
void reconstruct_into(const double* modes, const Basis& basis, double* out);

struct MomentSeries {
  std::string label;
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> variance;
};

}  // namespace fsc
