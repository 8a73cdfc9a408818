#include "fsc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fsc/error.hpp"

namespace fsc {

const char* to_string(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::ClosedForm:
      return "closed_form";
    case ReferenceKind::DenseQuadrature:
      return "dense_quadrature";
    case ReferenceKind::MonteCarlo:
      return "monte_carlo";
  }
  return "unknown";
}

NodeSetPtr dense_rule(const ProblemSpec& problem, int per_axis) {
  std::vector<int> pts(problem.measure.dim(), per_axis);
  return gauss_grid(problem.measure, pts);
}

MomentSeries closed_form_moments(const ProblemSpec& problem, const std::vector<double>& times,
                                 const NodeSetPtr& rule) {
  if (!problem.exact_response)
    throw Error(ErrorCode::InvalidParameters, "problem '" + problem.id + "' has no closed-form solution");
  const std::size_t Q = rule->size();
  const auto& w = rule->weights();
  MomentSeries s;
  s.label = problem.response_names.front();
  std::vector<double> x(Q);
  for (double t : times) {
    for (std::size_t q = 0; q < Q; ++q) x[q] = problem.exact_response(t, rule->point(q));
    double m = weighted_sum(x.data(), w);
    double v = 0.0;
    for (std::size_t q = 0; q < Q; ++q) v += w[q] * (x[q] - m) * (x[q] - m);
    s.times.push_back(t);
    s.mean.push_back(m);
    s.variance.push_back(v);
  }
  return s;
}

MomentSeries dense_path_moments(const ProblemSpec& problem, const NodeSetPtr& rule, double dt_out,
                                double T, int substeps, int response) {
  const ExplicitOde& ode = *problem.ode;
  if (response < 0 || response >= ode.order())
    throw Error(ErrorCode::InvalidParameters, "response index out of range");
  const std::size_t Q = rule->size();
  const std::size_t N = static_cast<std::size_t>(std::llround(T / dt_out));
  const double h = dt_out / substeps;
  std::vector<double> values((N + 1) * Q);
  for (std::size_t q = 0; q < Q; ++q) {
    const double* xi = rule->point(q);
    double s[16];
    ode.initial_state(xi, s);
    values[q] = s[response];
    for (std::size_t i = 0; i < N; ++i) {
      for (int k = 0; k < substeps; ++k)
        rk4_path_step(ode, static_cast<double>(i) * dt_out + k * h, xi, s, h);
      values[(i + 1) * Q + q] = s[response];
    }
  }
  const auto& w = rule->weights();
  MomentSeries out;
  out.label = problem.response_names.front();
  for (std::size_t i = 0; i <= N; ++i) {
    const double* x = values.data() + i * Q;
    double m = weighted_sum(x, w);
    double v = 0.0;
    for (std::size_t q = 0; q < Q; ++q) v += w[q] * (x[q] - m) * (x[q] - m);
    out.times.push_back(static_cast<double>(i) * dt_out);
    out.mean.push_back(m);
    out.variance.push_back(v);
  }
  return out;
}

namespace {

// Streaming central moments up to order four (Pebay 2008).
struct Moments4 {
  double n = 0, mean = 0, m2 = 0, m3 = 0, m4 = 0;

  void add(double x) {
    double n1 = n;
    n += 1.0;
    double delta = x - mean;
    double dn = delta / n;
    double dn2 = dn * dn;
    double term1 = delta * dn * n1;
    mean += dn;
    m4 += term1 * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * m2 - 4.0 * dn * m3;
    m3 += term1 * dn * (n - 2.0) - 3.0 * dn * m2;
    m2 += term1;
  }

  void merge(const Moments4& b) {
    if (b.n == 0) return;
    if (n == 0) {
      *this = b;
      return;
    }
    const double na = n, nb = b.n, nt = na + nb;
    const double d = b.mean - mean, d2 = d * d, d3 = d2 * d, d4 = d2 * d2;
    Moments4 r;
    r.n = nt;
    r.mean = mean + d * nb / nt;
    r.m2 = m2 + b.m2 + d2 * na * nb / nt;
    r.m3 = m3 + b.m3 + d3 * na * nb * (na - nb) / (nt * nt) + 3.0 * d * (na * b.m2 - nb * m2) / nt;
    r.m4 = m4 + b.m4 + d4 * na * nb * (na * na - na * nb + nb * nb) / (nt * nt * nt) +
           6.0 * d2 * (na * na * b.m2 + nb * nb * m2) / (nt * nt) + 4.0 * d * (na * b.m3 - nb * m3) / nt;
    *this = r;
  }
};

constexpr std::size_t kMcChunk = 4096;

}  // namespace

McReference mc_reference(const ProblemSpec& problem, std::size_t realizations, double dt, double T,
                         std::uint64_t seed, int response, std::size_t first) {
  if (realizations < 1) throw Error(ErrorCode::InvalidParameters, "realizations must be >= 1");
  const ExplicitOde& ode = *problem.ode;
  const std::size_t d = problem.measure.dim();
  const std::size_t N = static_cast<std::size_t>(std::llround(T / dt));
  std::vector<Moments4> total(N + 1), chunk(N + 1);
  for (std::size_t start = 0; start < realizations; start += kMcChunk) {
    const std::size_t count = std::min(kMcChunk, realizations - start);
    std::fill(chunk.begin(), chunk.end(), Moments4{});
    std::vector<double> xis = sample(problem.measure, count, seed, first + start);
    for (std::size_t r = 0; r < count; ++r) {
      const double* xi = xis.data() + r * d;
      double s[16];
      ode.initial_state(xi, s);
      chunk[0].add(s[response]);
      for (std::size_t i = 0; i < N; ++i) {
        rk4_path_step(ode, static_cast<double>(i) * dt, xi, s, dt);
        if (!std::isfinite(s[response])) {
          std::ostringstream os;
          os.precision(17);
          os << "path diverged at t = " << (i + 1) * dt << " for xi = (";
          for (std::size_t k = 0; k < d; ++k) os << (k ? ", " : "") << xi[k];
          os << ")";
          Error e(ErrorCode::NonfinitePath, os.str());
          e.index = static_cast<long>(first + start + r);
          throw e;
        }
        chunk[i + 1].add(s[response]);
      }
    }
    for (std::size_t i = 0; i <= N; ++i) total[i].merge(chunk[i]);
  }
  McReference ref;
  ref.realizations = realizations;
  ref.series.label = problem.response_names.front();
  for (std::size_t i = 0; i <= N; ++i) {
    const Moments4& m = total[i];
    double var = m.m2 / m.n;
    double m4 = m.m4 / m.n;
    ref.series.times.push_back(static_cast<double>(i) * dt);
    ref.series.mean.push_back(m.mean);
    ref.series.variance.push_back(var);
    ref.se_mean.push_back(std::sqrt(var / m.n));
    ref.se_var.push_back(std::sqrt(std::max(0.0, m4 - var * var) / m.n));
  }
  return ref;
}

double global_error(const std::vector<double>& local, double dt, double T) {
  double s = 0.0;
  for (double e : local) s += e;
  return dt / T * s;
}

namespace {

double interpolate(const std::vector<double>& t, const std::vector<double>& y, double x) {
  auto it = std::lower_bound(t.begin(), t.end(), x);
  if (it == t.end()) return y.back();
  std::size_t i = static_cast<std::size_t>(it - t.begin());
  if (*it == x || i == 0) return y[i];
  double a = (x - t[i - 1]) / (t[i] - t[i - 1]);
  return (1.0 - a) * y[i - 1] + a * y[i];
}

}  // namespace

ErrorReport error_metrics(const MomentSeries& test, const MomentSeries& ref, ReferenceKind kind) {
  if (test.times.size() < 2 || ref.times.empty())
    throw Error(ErrorCode::GridMismatch, "moment series need at least two samples");
  const double T = test.times.back();
  const double tol = 1e-9 * std::max(1.0, std::abs(T));
  if (std::abs(ref.times.back() - T) > tol || std::abs(ref.times.front() - test.times.front()) > tol)
    throw Error(ErrorCode::GridMismatch, "test and reference horizons differ");
  ErrorReport r;
  r.reference = kind;
  r.times = test.times;
  bool same = ref.times.size() == test.times.size();
  for (std::size_t i = 0; same && i < test.times.size(); ++i)
    same = std::abs(ref.times[i] - test.times[i]) <= tol;
  r.interpolated = !same;
  for (std::size_t i = 0; i < test.times.size(); ++i) {
    double rm = same ? ref.mean[i] : interpolate(ref.times, ref.mean, test.times[i]);
    double rv = same ? ref.variance[i] : interpolate(ref.times, ref.variance, test.times[i]);
    r.eps_mean.push_back(std::abs(test.mean[i] - rm));
    r.eps_var.push_back(std::abs(test.variance[i] - rv));
  }
  const double dt = test.times[1] - test.times[0];
  r.global_mean = global_error(r.eps_mean, dt, T);
  r.global_var = global_error(r.eps_var, dt, T);
  return r;
}

}  // namespace fsc
