#include "fsc/rfs.hpp"

#include <algorithm>
#include <cmath>

#include "fsc/error.hpp"

namespace fsc {

Basis::Basis(NodeSetPtr carrier, std::vector<double> nodal, std::size_t count)
    : carrier_(std::move(carrier)), count_(count), values_(std::move(nodal)) {
  const std::size_t Q = nodes();
  if (count_ < 1 || values_.size() != count_ * Q)
    throw Error(ErrorCode::InvalidParameters, "basis storage does not match its carrier");
  for (std::size_t q = 0; q < Q; ++q)
    if (values_[q] != 1.0) throw Error(ErrorCode::InvalidParameters, "Psi_0 must be identically 1");
  const auto& w = carrier_->weights();
  norms_.resize(count_);
  dual_.resize(values_.size());
  for (std::size_t j = 0; j < count_; ++j) {
    const double* psi = values(j);
    norms_[j] = weighted_sum(psi, psi, w);
    if (!(norms_[j] > 0.0))
      throw Error(ErrorCode::DegenerateFunction, "basis function with zero norm");
    double* dj = dual_.data() + j * Q;
    for (std::size_t q = 0; q < Q; ++q) dj[q] = w[q] * psi[q] / norms_[j];
  }
  sources_.assign(count_, -1);
  for (std::size_t j = 1; j < count_; ++j) sources_[j] = static_cast<int>(j) - 1;
}

RandomFunction Basis::function(std::size_t j) const {
  return RandomFunction(carrier_, std::vector<double>(values(j), values(j) + nodes()));
}

void Basis::set_provenance(std::vector<int> sources, std::vector<int> dropped,
                           Eigen::MatrixXd coeffs) {
  sources_ = std::move(sources);
  dropped_ = std::move(dropped);
  raw_coeffs_ = std::move(coeffs);
}

namespace {

void check_raw(const std::vector<RandomFunction>& raw) {
  for (const auto& f : raw) require_same_carrier(raw.front().carrier(), f.carrier());
}

void count(OpCounter* c, std::uint64_t n) {
  if (c) c->flops += n;
}

}  // namespace

Basis gram_schmidt(const std::vector<RandomFunction>& raw, const OrthoOptions& opts) {
  if (raw.empty()) throw Error(ErrorCode::InvalidParameters, "no raw functions to orthogonalize");
  check_raw(raw);
  const NodeSetPtr& nodes = raw.front().carrier();
  const auto& w = nodes->weights();
  const std::size_t Q = nodes->size();
  const std::size_t P = raw.size();

  std::vector<double> psi(Q, 1.0);
  std::vector<double> norms{1.0};
  std::vector<int> sources{-1}, dropped;
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(P, P + 1);
  std::vector<double> cand(Q);

  for (std::size_t j = 0; j < P; ++j) {
    const double* phi = raw[j].data();
    std::copy(phi, phi + Q, cand.begin());
    for (std::size_t k = 1; k < norms.size(); ++k) {
      const double* pk = psi.data() + k * Q;
      double ck = weighted_sum(phi, pk, w) / norms[k];
      count(opts.counter, 3 * Q);
      for (std::size_t q = 0; q < Q; ++q) cand[q] -= ck * pk[q];
      count(opts.counter, 2 * Q);
      coeffs(j, k) = ck;
    }
    // The Psi_0 = 1 component (the weighted mean) goes last. In exact arithmetic it equals
    // E[Phi_j]; taken last it also removes the mean that rounding left in the other terms,
    // so E[Psi_j] stays at rounding level however large the ck are.
    double c0 = weighted_sum(cand.data(), w);
    count(opts.counter, 2 * Q);
    for (std::size_t q = 0; q < Q; ++q) cand[q] -= c0;
    count(opts.counter, Q);
    coeffs(j, 0) = c0;
    double ups = weighted_sum(cand.data(), cand.data(), w);
    count(opts.counter, 3 * Q);
    // <Phi_j, Phi_j> by Pythagoras over the orthogonal pieces.
    double scale = ups + c0 * c0;
    for (std::size_t k = 1; k < norms.size(); ++k) scale += coeffs(j, k) * coeffs(j, k) * norms[k];
    if (!(ups > opts.tol_drop * scale)) {
      if (opts.policy == DependencePolicy::Throw) {
        Error e(ErrorCode::DegenerateFunction,
                "raw function " + std::to_string(j + 1) + " is linearly dependent on its predecessors");
        e.index = static_cast<long>(j);
        throw e;
      }
      dropped.push_back(static_cast<int>(j));
      continue;
    }
    coeffs(j, norms.size()) = 1.0;
    psi.insert(psi.end(), cand.begin(), cand.end());
    norms.push_back(ups);
    sources.push_back(static_cast<int>(j));
  }
  std::size_t count_kept = norms.size();
  Basis b(nodes, std::move(psi), count_kept);
  b.set_provenance(std::move(sources), std::move(dropped), coeffs.leftCols(count_kept));
  return b;
}

CovarianceStats covariance_stats(const std::vector<RandomFunction>& raw) {
  check_raw(raw);
  const auto& w = raw.front().carrier()->weights();
  const std::size_t Q = w.size(), P = raw.size();
  CovarianceStats s;
  s.mean.resize(P);
  std::vector<std::vector<double>> centered(P, std::vector<double>(Q));
  for (std::size_t i = 0; i < P; ++i) {
    s.mean[i] = raw[i].mean();
    for (std::size_t q = 0; q < Q; ++q) centered[i][q] = raw[i][q] - s.mean[i];
  }
  s.cov.resize(P, P);
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      s.cov(i, j) = s.cov(j, i) = weighted_sum(centered[i].data(), centered[j].data(), w);
  return s;
}

Basis theorem1_orthogonalize(const std::vector<RandomFunction>& raw, const CovarianceStats* stats,
                             const OrthoOptions& opts) {
  if (raw.empty()) throw Error(ErrorCode::InvalidParameters, "no raw functions to orthogonalize");
  check_raw(raw);
  CovarianceStats local;
  if (!stats) {
    local = covariance_stats(raw);
    stats = &local;
  }
  const std::size_t P = raw.size();
  if (stats->mean.size() != P || stats->cov.rows() != static_cast<long>(P))
    throw Error(ErrorCode::InvalidParameters, "statistics do not match the raw functions");
  const NodeSetPtr& nodes = raw.front().carrier();
  const std::size_t Q = nodes->size();
  const Eigen::MatrixXd& C = stats->cov;

  std::vector<double> psi(Q, 1.0);
  std::vector<int> kept;  // raw indices behind Psi_1..Psi_k
  std::vector<int> sources{-1}, dropped;
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(P, P + 1);
  // Box_k^{-1} e_k for every kept prefix; det(Delta_k(j))/det(Box_k) = r^T Box_k^{-1} e_k.
  std::vector<Eigen::VectorXd> last_col_inv;
  double det_prev = 1.0;

  for (std::size_t j = 0; j < P; ++j) {
    const std::size_t k = kept.size();
    Eigen::VectorXd ratios(k);
    Eigen::VectorXd r(k);
    for (std::size_t a = 0; a < k; ++a) r[a] = C(j, kept[a]);
    for (std::size_t m = 0; m < k; ++m) ratios[m] = r.head(m + 1).dot(last_col_inv[m]);

    // Candidate box including j and the implied squared norm det(Box_{k+1}) / det(Box_k).
    Eigen::MatrixXd box(k + 1, k + 1);
    for (std::size_t a = 0; a <= k; ++a)
      for (std::size_t b = 0; b <= k; ++b) {
        int ia = a < k ? kept[a] : static_cast<int>(j);
        int ib = b < k ? kept[b] : static_cast<int>(j);
        box(a, b) = C(ia, ib);
      }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(box);
    double det = lu.determinant();
    double ups = det / det_prev;
    double scale = C(j, j) + stats->mean[j] * stats->mean[j];

    coeffs(j, 0) = stats->mean[j];
    for (std::size_t m = 0; m < k; ++m) coeffs(j, m + 1) = ratios[m];
    if (!(ups > opts.tol_drop * scale) || !std::isfinite(ups)) {
      if (opts.policy == DependencePolicy::Throw) {
        Error e(ErrorCode::SingularCovariance,
                "covariance block is singular at raw function " + std::to_string(j + 1));
        e.index = static_cast<long>(j);
        throw e;
      }
      dropped.push_back(static_cast<int>(j));
      continue;
    }
    coeffs(j, k + 1) = 1.0;

    std::vector<double> cand(Q);
    const double* phi = raw[j].data();
    for (std::size_t q = 0; q < Q; ++q) cand[q] = phi[q] - stats->mean[j];
    for (std::size_t m = 0; m < k; ++m) {
      const double* pm = psi.data() + (m + 1) * Q;
      for (std::size_t q = 0; q < Q; ++q) cand[q] -= ratios[m] * pm[q];
    }
    count(opts.counter, Q + 2 * Q * k);
    psi.insert(psi.end(), cand.begin(), cand.end());
    kept.push_back(static_cast<int>(j));
    sources.push_back(static_cast<int>(j));
    Eigen::VectorXd ek = Eigen::VectorXd::Zero(k + 1);
    ek[k] = 1.0;
    last_col_inv.push_back(lu.solve(ek));
    det_prev = det;
  }
  std::size_t count_kept = kept.size() + 1;
  Basis b(nodes, std::move(psi), count_kept);
  b.set_provenance(std::move(sources), std::move(dropped), coeffs.leftCols(count_kept));
  return b;
}

CovarianceDeterminants::CovarianceDeterminants(Eigen::MatrixXd cov) : cov_(std::move(cov)) {
  const int P = static_cast<int>(cov_.rows());
  for (int k = 1; k <= P; ++k) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(cov_.topLeftCorner(k, k));
    Eigen::VectorXd ek = Eigen::VectorXd::Zero(k);
    ek[k - 1] = 1.0;
    last_col_inv_.push_back(lu.solve(ek));
  }
}

double CovarianceDeterminants::det_box(int k) const {
  if (k == 0) return 1.0;
  return Eigen::PartialPivLU<Eigen::MatrixXd>(cov_.topLeftCorner(k, k)).determinant();
}

double CovarianceDeterminants::det_delta(int k, int j) const {
  Eigen::MatrixXd d = cov_.topLeftCorner(k, k);
  for (int b = 0; b < k; ++b) d(k - 1, b) = cov_(j - 1, b);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(d).determinant();
}

double CovarianceDeterminants::ratio(int k, int j) const {
  Eigen::VectorXd r(k);
  for (int b = 0; b < k; ++b) r[b] = cov_(j - 1, b);
  return r.dot(last_col_inv_[k - 1]);
}

double projection_coeff(const Basis& basis, const RandomFunction& f, std::size_t j) {
  require_same_carrier(basis.carrier(), f.carrier());
  const double* d = basis.dual(j);
  double s = 0.0;
  for (std::size_t q = 0; q < basis.nodes(); ++q) s += d[q] * f[q];
  return s;
}

std::vector<double> project(const Basis& basis, const double* f) {
  std::vector<double> out(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const double* d = basis.dual(j);
    double s = 0.0;
    for (std::size_t q = 0; q < basis.nodes(); ++q) s += d[q] * f[q];
    out[j] = s;
  }
  return out;
}

std::vector<double> project(const Basis& basis, const RandomFunction& f) {
  require_same_carrier(basis.carrier(), f.carrier());
  return project(basis, f.data());
}

std::uint64_t cost_q_coefficient_x2(CostMethod method, std::uint64_t P) {
  if (P == 0) return 0;
  switch (method) {
    case CostMethod::Thm1Known:
      return 2 * P * (P + 1);
    case CostMethod::Thm1Unknown:
      return 7 * P * P + 11 * P;
    case CostMethod::ClassicGS:
      return 5 * P * P + 9 * P - 6;
  }
  return 0;
}

std::uint64_t cost_model(CostMethod method, std::uint64_t P, std::uint64_t Q) {
  if (P == 0) return 0;
  using I = __int128;
  const I p = P, q = Q;
  I num = 0, den = 1;
  switch (method) {
    case CostMethod::Thm1Known:
      num = 30 * p * (p + 1) * q + p * p * p * p * p + 5 * p * p * p * p - 10 * p * p * p +
            10 * p * p - 36 * p + 30;
      den = 30;
      break;
    case CostMethod::Thm1Unknown:
      num = 15 * (7 * p * p + 11 * p) * q + p * p * p * p * p + 5 * p * p * p * p -
            10 * p * p * p - 5 * p * p - 81 * p + 30;
      den = 30;
      break;
    case CostMethod::ClassicGS:
      num = (5 * p * p + 9 * p - 6) * q - 4 * p + 2;
      den = 2;
      break;
  }
  return static_cast<std::uint64_t>(num / den);
}

}  // namespace fsc
