#include "fsc/spectral.hpp"

#include <algorithm>

#include "fsc/error.hpp"

namespace fsc {

namespace {

void indices_of_degree(std::size_t d, int remaining, std::size_t pos, std::vector<int>& cur,
                       std::vector<std::vector<int>>& out) {
  if (pos + 1 == d) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[pos] = k;
    indices_of_degree(d, remaining - k, pos + 1, cur, out);
  }
}

}  // namespace

std::vector<std::vector<int>> gpc_multi_indices(std::size_t d, int p) {
  if (d < 1 || p < 0) throw Error(ErrorCode::InvalidParameters, "gPC needs d >= 1 and p >= 0");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(d, 0);
  for (int deg = 0; deg <= p; ++deg) indices_of_degree(d, deg, 0, cur, out);
  return out;
}

std::size_t gpc_size(std::size_t d, int p) {
  // (d+p)! / (d! p!)
  double r = 1.0;
  for (int i = 1; i <= p; ++i) r = r * static_cast<double>(d + i) / i;
  return static_cast<std::size_t>(r + 0.5);
}

std::vector<double> monic_orthogonal_values(const Distribution& dist, int deg, double x) {
  Recurrence r = dist.recurrence(deg + 1);
  std::vector<double> v(deg + 1);
  v[0] = 1.0;
  if (deg >= 1) v[1] = x - r.alpha[0];
  for (int k = 1; k < deg; ++k) v[k + 1] = (x - r.alpha[k]) * v[k] - r.beta[k] * v[k - 1];
  return v;
}

Basis gpc_basis(const ProductMeasure& measure, int p, const NodeSetPtr& nodes) {
  const std::size_t d = measure.dim();
  if (nodes->dim() != d) throw Error(ErrorCode::InvalidParameters, "measure and nodes differ in d");
  auto idx = gpc_multi_indices(d, p);
  const std::size_t Q = nodes->size();
  // uni[i][q * (p+1) + k] = p_k(xi^i_q)
  std::vector<std::vector<double>> uni(d, std::vector<double>(Q * (p + 1)));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t q = 0; q < Q; ++q) {
      auto v = monic_orthogonal_values(measure[i], p, nodes->coord(q, i));
      std::copy(v.begin(), v.end(), uni[i].begin() + q * (p + 1));
    }
  std::vector<double> values(idx.size() * Q);
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t q = 0; q < Q; ++q) {
      double prod = 1.0;
      for (std::size_t i = 0; i < d; ++i) prod *= uni[i][q * (p + 1) + idx[j][i]];
      values[j * Q + q] = prod;
    }
  if (nodes->kind() == NodeKind::GaussFullGrid) return Basis(nodes, std::move(values), idx.size());
  std::vector<RandomFunction> raw;
  for (std::size_t j = 1; j < idx.size(); ++j)
    raw.emplace_back(nodes, std::vector<double>(values.begin() + j * Q, values.begin() + (j + 1) * Q));
  if (raw.empty()) return Basis(nodes, std::vector<double>(Q, 1.0), 1);
  return gram_schmidt(raw);
}

double mean(const std::vector<double>& modes, const Basis& basis) {
  if (modes.size() != basis.size()) throw Error(ErrorCode::InvalidParameters, "mode count mismatch");
  return modes[0];
}

double variance(const std::vector<double>& modes, const Basis& basis) {
  if (modes.size() != basis.size()) throw Error(ErrorCode::InvalidParameters, "mode count mismatch");
  double v = 0.0;
  for (std::size_t j = 1; j < modes.size(); ++j) v += basis.norm(j) * modes[j] * modes[j];
  return v;
}

void reconstruct_into(const double* modes, const Basis& basis, double* out) {
  const std::size_t Q = basis.nodes();
  std::fill(out, out + Q, modes[0]);
  for (std::size_t j = 1; j < basis.size(); ++j) {
    const double* psi = basis.values(j);
    const double m = modes[j];
    for (std::size_t q = 0; q < Q; ++q) out[q] += m * psi[q];
  }
}

RandomFunction reconstruct(const std::vector<double>& modes, const Basis& basis) {
  if (modes.size() != basis.size()) throw Error(ErrorCode::InvalidParameters, "mode count mismatch");
  std::vector<double> v(basis.nodes());
  reconstruct_into(modes.data(), basis, v.data());
  return RandomFunction(basis.carrier(), std::move(v));
}

}  // namespace fsc
