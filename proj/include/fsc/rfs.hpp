#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fsc/random_function.hpp"

namespace fsc {

// Ordered orthogonal functions {Psi_0 = 1, Psi_1, ..., Psi_P} on a carrier, with their
// squared norms and the bookkeeping of how they were built from raw inputs.
class Basis {
 public:
  Basis() = default;
  // `values` holds (P+1) rows of length Q, row 0 must be identically 1.
  Basis(NodeSetPtr carrier, std::vector<double> values, std::size_t count);

  std::size_t size() const { return count_; }
  std::size_t nodes() const { return carrier_ ? carrier_->size() : 0; }
  const NodeSetPtr& carrier() const { return carrier_; }
  const double* values(std::size_t j) const { return values_.data() + j * nodes(); }
  // Row j scaled by w_q / Upsilon_jj, so that a dot product with f gives the projection coefficient.
  const double* dual(std::size_t j) const { return dual_.data() + j * nodes(); }
  double norm(std::size_t j) const { return norms_[j]; }
  const std::vector<double>& norms() const { return norms_; }
  RandomFunction function(std::size_t j) const;

  // Raw index (0-based) that produced each basis function; -1 for the constant.
  const std::vector<int>& sources() const { return sources_; }
  // Raw indices rejected as linearly dependent.
  const std::vector<int>& dropped() const { return dropped_; }
  // Row i expands raw function i over the basis: Phi_i = sum_j C(i, j) Psi_j.
  const Eigen::MatrixXd& raw_coefficients() const { return raw_coeffs_; }

  void set_provenance(std::vector<int> sources, std::vector<int> dropped, Eigen::MatrixXd coeffs);

 private:
  NodeSetPtr carrier_;
  std::size_t count_ = 0;
  std::vector<double> values_;
  std::vector<double> dual_;
  std::vector<double> norms_;
  std::vector<int> sources_;
  std::vector<int> dropped_;
  Eigen::MatrixXd raw_coeffs_;
};

enum class DependencePolicy { Throw, Drop };

// Elementary floating-point operations spent on node-sized loops.
struct OpCounter {
  std::uint64_t flops = 0;
};

struct OrthoOptions {
  DependencePolicy policy = DependencePolicy::Throw;
  // A candidate is dependent when its residual norm falls below tol_drop * <Phi_j, Phi_j>.
  double tol_drop = 1e-12;
  OpCounter* counter = nullptr;
};

// Classic Gram-Schmidt with Psi_0 = 1 prepended to `raw`.
Basis gram_schmidt(const std::vector<RandomFunction>& raw, const OrthoOptions& opts = {});

struct CovarianceStats {
  std::vector<double> mean;
  Eigen::MatrixXd cov;
};

// E[Phi_j] and Cov[Phi_i, Phi_j] from nodal values (centered before multiplying).
CovarianceStats covariance_stats(const std::vector<RandomFunction>& raw);

// Orthogonalization through ratios of covariance determinants:
//   Psi_j = Phi_j - E[Phi_j] - sum_{k<j} det(Delta_k(j)) / det(Box_k) Psi_k,
// Box_k the covariance of Phi_1..Phi_k and Delta_k(j) the same matrix with its last row
// replaced by Cov[Phi_j, Phi_1..Phi_k]. Uses `stats` when given.
Basis theorem1_orthogonalize(const std::vector<RandomFunction>& raw,
                             const CovarianceStats* stats = nullptr,
                             const OrthoOptions& opts = {});

// Determinants of leading covariance blocks and their row-replaced variants.
class CovarianceDeterminants {
 public:
  explicit CovarianceDeterminants(Eigen::MatrixXd cov);

  // det of the leading k x k block; det_box(0) = 1. Indices are 1-based as in Phi_1..Phi_P.
  double det_box(int k) const;
  // det of Box_k with row k replaced by Cov[Phi_j, Phi_1..Phi_k], built explicitly.
  double det_delta(int k, int j) const;
  // det(Delta_k(j)) / det(Box_k) through the matrix determinant lemma.
  double ratio(int k, int j) const;

 private:
  Eigen::MatrixXd cov_;
  std::vector<Eigen::VectorXd> last_col_inv_;  // Box_k^{-1} e_k
};

// <Psi_j, f> / Upsilon_jj.
double projection_coeff(const Basis& basis, const RandomFunction& f, std::size_t j);
std::vector<double> project(const Basis& basis, const RandomFunction& f);
std::vector<double> project(const Basis& basis, const double* f);

enum class CostMethod { Thm1Known, Thm1Unknown, ClassicGS };

// Closed-form elementary operation counts for orthogonalizing P functions on Q nodes.
std::uint64_t cost_model(CostMethod method, std::uint64_t P, std::uint64_t Q);
// Coefficient of Q in cost_model, as an exact fraction numerator / 2.
std::uint64_t cost_q_coefficient_x2(CostMethod method, std::uint64_t P);

}  // namespace fsc
