#include "fsc/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>

#include "fsc/error.hpp"
#include "fsc/random_function.hpp"

namespace fsc {

NodeSet::NodeSet(std::size_t dim, std::vector<double> points, std::vector<double> weights,
                 NodeKind kind)
    : dim_(dim), points_(std::move(points)), weights_(std::move(weights)), kind_(kind) {
  if (dim_ < 1 || weights_.empty() || points_.size() != dim_ * weights_.size())
    throw Error(ErrorCode::InvalidParameters, "node set shape mismatch");
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w))
      throw Error(ErrorCode::InvalidParameters, "node weights must be positive and finite");
}

std::vector<double> NodeSet::coordinate(std::size_t i) const {
  std::vector<double> c(size());
  for (std::size_t q = 0; q < size(); ++q) c[q] = coord(q, i);
  return c;
}

namespace {

struct PolyEval {
  double ratio;   // p_n(x) / p_n'(x)
  double weight;  // Christoffel weight 1 / sum_{k<n} p_k(x)^2
};

// Orthonormal recurrence evaluated with rescaling so that Laguerre tails cannot overflow.
PolyEval evaluate_orthonormal(const Recurrence& r, int n, double x) {
  double p_prev = 0.0, p = 1.0, d_prev = 0.0, d = 0.0;
  double sum = 0.0, log_scale = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += p * p;
    double sb = k == 0 ? 0.0 : std::sqrt(r.beta[k]);
    double sb1 = std::sqrt(r.beta[k + 1]);
    double p_next = ((x - r.alpha[k]) * p - sb * p_prev) / sb1;
    double d_next = (p + (x - r.alpha[k]) * d - sb * d_prev) / sb1;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
    double mag = std::max({std::abs(p), std::abs(d), std::abs(p_prev)});
    if (mag > 1e120) {
      const double f = 1e-120;
      p *= f;
      p_prev *= f;
      d *= f;
      d_prev *= f;
      sum *= f * f;
      log_scale += -std::log(f);
    }
  }
  PolyEval e;
  e.ratio = d != 0.0 ? p / d : 0.0;
  e.weight = std::exp(-(std::log(sum) + 2.0 * log_scale));
  return e;
}

}  // namespace

NodeSetPtr gauss_rule(const Distribution& dist, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidParameters, "gauss rule needs n >= 1");
  Recurrence r = dist.recurrence(n + 1);
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag[k] = r.alpha[k];
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(r.beta[k]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::NumericalFailure, "Jacobi matrix eigen-solve did not converge");

  std::vector<double> x(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(x.begin(), x.end());
  std::vector<double> nodes, weights;
  nodes.reserve(n);
  weights.reserve(n);
  for (int q = 0; q < n; ++q) {
    double xq = x[q];
    double gap = std::numeric_limits<double>::infinity();
    if (q > 0) gap = std::min(gap, xq - x[q - 1]);
    if (q + 1 < n) gap = std::min(gap, x[q + 1] - xq);
    for (int it = 0; it < 2; ++it) {
      double step = evaluate_orthonormal(r, n, xq).ratio;
      if (!std::isfinite(step) || std::abs(step) > 1e-3 * gap) break;
      xq -= step;
    }
    double w = evaluate_orthonormal(r, n, xq).weight;
    // Far Laguerre and Hermite tails can underflow; such nodes carry no mass in double precision.
    if (w > 0.0 && std::isfinite(w)) {
      nodes.push_back(xq);
      weights.push_back(w);
    }
  }
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return std::make_shared<const NodeSet>(1, std::move(nodes), std::move(weights),
                                         NodeKind::GaussFullGrid);
}

NodeSetPtr tensor_grid(const std::vector<NodeSetPtr>& rules) {
  if (rules.empty()) throw Error(ErrorCode::InvalidParameters, "tensor grid needs a rule");
  if (rules.size() > 3)
    throw Error(ErrorCode::DimensionTooLarge,
                "full tensor grids are limited to d <= 3; use Monte Carlo nodes");
  if (rules.size() == 1) return rules[0];
  std::size_t d = rules.size(), total = 1;
  for (const auto& r : rules) {
    if (r->dim() != 1) throw Error(ErrorCode::InvalidParameters, "tensor factors must be 1-D");
    total *= r->size();
  }
  std::vector<double> pts(total * d), w(total);
  for (std::size_t q = 0; q < total; ++q) {
    std::size_t rem = q;
    double wq = 1.0;
    for (std::size_t i = d; i-- > 0;) {
      std::size_t qi = rem % rules[i]->size();
      rem /= rules[i]->size();
      pts[q * d + i] = rules[i]->coord(qi, 0);
      wq *= rules[i]->weights()[qi];
    }
    w[q] = wq;
  }
  return std::make_shared<const NodeSet>(d, std::move(pts), std::move(w), NodeKind::GaussFullGrid);
}

NodeSetPtr gauss_grid(const ProductMeasure& measure, const std::vector<int>& points_per_dim) {
  if (measure.dim() > 3)
    throw Error(ErrorCode::DimensionTooLarge,
                "full tensor grids are limited to d <= 3; use Monte Carlo nodes");
  std::vector<NodeSetPtr> rules;
  for (std::size_t i = 0; i < measure.dim(); ++i) {
    int n = i < points_per_dim.size() ? points_per_dim[i] : default_gauss_points(measure[i]);
    rules.push_back(gauss_rule(measure[i], n));
  }
  return tensor_grid(rules);
}

NodeSetPtr mc_nodes(const ProductMeasure& measure, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::InvalidParameters, "Monte Carlo node count must be >= 1");
  std::vector<double> pts = sample(measure, count, seed);
  std::vector<double> w(count, 1.0 / static_cast<double>(count));
  return std::make_shared<const NodeSet>(measure.dim(), std::move(pts), std::move(w),
                                         NodeKind::MonteCarlo);
}

NodeSetPtr reweight(const NodeSet& base, const std::function<double(const double*)>& factor) {
  std::vector<double> pts, w;
  for (std::size_t q = 0; q < base.size(); ++q) {
    double wq = base.weights()[q] * factor(base.point(q));
    if (wq > 0.0) {
      pts.insert(pts.end(), base.point(q), base.point(q) + base.dim());
      w.push_back(wq);
    }
  }
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return std::make_shared<const NodeSet>(base.dim(), std::move(pts), std::move(w),
                                         NodeKind::Reweighted);
}

int default_gauss_points(const Distribution& dist) {
  switch (dist.kind()) {
    case DistKind::Uniform:
      return 100;
    case DistKind::Beta:
      return 80;
    case DistKind::Gamma:
      return 140;
    case DistKind::Normal:
      return 110;
  }
  return 100;
}

double weighted_sum(const double* f, const double* g, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t q = 0; q < w.size(); ++q) s += f[q] * g[q] * w[q];
  return s;
}

double weighted_sum(const double* f, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t q = 0; q < w.size(); ++q) s += f[q] * w[q];
  return s;
}

// RandomFunction

void require_same_carrier(const NodeSetPtr& a, const NodeSetPtr& b) {
  if (a.get() != b.get() || !a)
    throw Error(ErrorCode::NodeSetMismatch, "random functions live on different node sets");
}

RandomFunction::RandomFunction(NodeSetPtr carrier, std::vector<double> values)
    : carrier_(std::move(carrier)), values_(std::move(values)) {
  if (!carrier_ || values_.size() != carrier_->size())
    throw Error(ErrorCode::InvalidParameters, "random function length does not match its carrier");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidParameters, "random function is not finite");
}

RandomFunction RandomFunction::from(NodeSetPtr carrier,
                                    const std::function<double(const double*)>& f) {
  std::vector<double> v(carrier->size());
  for (std::size_t q = 0; q < v.size(); ++q) v[q] = f(carrier->point(q));
  return RandomFunction(std::move(carrier), std::move(v));
}

RandomFunction RandomFunction::constant(NodeSetPtr carrier, double c) {
  std::vector<double> v(carrier->size(), c);
  return RandomFunction(std::move(carrier), std::move(v));
}

double RandomFunction::mean() const { return weighted_sum(values_.data(), carrier_->weights()); }

namespace {
template <class Op>
RandomFunction combine(const RandomFunction& a, const RandomFunction& b, Op op) {
  require_same_carrier(a.carrier(), b.carrier());
  std::vector<double> v(a.size());
  for (std::size_t q = 0; q < v.size(); ++q) v[q] = op(a[q], b[q]);
  return RandomFunction(a.carrier(), std::move(v));
}
}  // namespace

RandomFunction RandomFunction::operator+(const RandomFunction& o) const {
  return combine(*this, o, [](double x, double y) { return x + y; });
}
RandomFunction RandomFunction::operator-(const RandomFunction& o) const {
  return combine(*this, o, [](double x, double y) { return x - y; });
}
RandomFunction RandomFunction::operator*(const RandomFunction& o) const {
  return combine(*this, o, [](double x, double y) { return x * y; });
}
RandomFunction RandomFunction::operator*(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return RandomFunction(carrier_, std::move(v));
}

double inner(const RandomFunction& f, const RandomFunction& g) {
  require_same_carrier(f.carrier(), g.carrier());
  return weighted_sum(f.data(), g.data(), f.carrier()->weights());
}

double inner(const RandomFunction& f, const RandomFunction& g, const NodeSetPtr& nodes) {
  require_same_carrier(f.carrier(), nodes);
  require_same_carrier(g.carrier(), nodes);
  return weighted_sum(f.data(), g.data(), nodes->weights());
}

}  // namespace fsc
