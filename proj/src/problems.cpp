#include "fsc/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fsc/error.hpp"

namespace fsc {

LinearOde::LinearOde(int n, std::size_t d, Coefficients coeffs, Ic ic, std::string name)
    : n_(n), d_(d), coeffs_(std::move(coeffs)), ic_(std::move(ic)), name_(std::move(name)) {
  if (n_ < 1 || n_ > 8) throw Error(ErrorCode::InvalidParameters, "linear ODE order must lie in 1..8");
}

double LinearOde::rhs(double, const double* xi, const double* s) const {
  double a[8], c = 0.0;
  coeffs_(xi, a, c);
  double f = c;
  for (int k = 0; k < n_; ++k) f += a[k] * s[k];
  return f;
}

double LinearOde::total_derivative(int m, double, const double* xi, const double* e) const {
  double a[8], c = 0.0;
  coeffs_(xi, a, c);
  double f = 0.0;
  for (int k = 0; k < n_; ++k) f += a[k] * e[m + k];
  return f;
}

double VanDerPolOde::rhs(double, const double* xi, const double* s) const {
  const double c = xi[0], u = s[0], v = s[1];
  return ((1.0 - rho * u * u) * c * v - k * u) / m;
}

void VanDerPolOde::initial_state(const double* xi, double* s) const {
  s[0] = xi[1];
  s[1] = v_slope * xi[1] + v_offset;
}

double VanDerPolOde::total_derivative(int mth, double, const double* xi, const double* e) const {
  const double c = xi[0], u = e[0], v = e[1], a = e[2];
  const double g = (1.0 - rho * u * u) * c;
  switch (mth) {
    case 1:
      return (-2.0 * rho * c * u * v * v + g * a - k * v) / m;
    case 2: {
      const double j = e[3];
      return (-2.0 * rho * c * v * v * v - 6.0 * rho * c * u * v * a + g * j - k * a) / m;
    }
    case 3: {
      const double j = e[3], s4 = e[4];
      return (-12.0 * rho * c * v * v * a - 6.0 * rho * c * u * a * a - 8.0 * rho * c * u * v * j +
              g * s4 - k * j) /
             m;
    }
    default:
      return ExplicitOde::total_derivative(mth, 0.0, xi, e);
  }
}

HighDimPoint highdim_point(int d, double t, const double* x) {
  auto xi = [&](int i) { return i <= d ? x[i - 1] : 0.0; };
  const double A = (xi(1) + 40.0) * (xi(6) + xi(7) + 40.0) / 2400.0;
  const double lam = (xi(2) + 7.0) / 77.0;
  const double B = (xi(3) + 7.0) * (xi(8) + 40.0) / 1200.0;
  const double S = xi(9) + xi(10);
  const double w = std::numbers::pi / 7.0;
  const double ex = std::exp(-lam * t);
  HighDimPoint p;
  p.k[0] = A * (3.0 - ex);
  p.k[1] = A * lam * ex;
  p.k[2] = -A * lam * lam * ex;
  p.k[3] = A * lam * lam * lam * ex;
  const double sn = std::sin(w * t), cs = std::cos(w * t);
  p.f[0] = B * (S * sn + 3.0);
  p.f[1] = B * S * w * cs;
  p.f[2] = -B * S * w * w * sn;
  p.f[3] = -B * S * w * w * w * cs;
  p.u0 = (xi(4) + 8.0) / 7.0;
  p.v0 = (xi(5) + 7.0) / 8.0;
  return p;
}

HighDimOde::HighDimOde(int d) : d_(d) {
  if (d != 5 && d != 7 && d != 10)
    throw Error(ErrorCode::UnknownVariant, "high-dimensional problem supports d = 5, 7, 10");
}

double HighDimOde::rhs(double t, const double* xi, const double* s) const {
  HighDimPoint p = highdim_point(d_, t, xi);
  return p.f[0] - p.k[0] * s[0];
}

void HighDimOde::initial_state(const double* xi, double* s) const {
  HighDimPoint p = highdim_point(d_, 0.0, xi);
  s[0] = p.u0;
  s[1] = p.v0;
}

double HighDimOde::total_derivative(int m, double t, const double* xi, const double* e) const {
  HighDimPoint p = highdim_point(d_, t, xi);
  const double* K = p.k;
  const double* F = p.f;
  switch (m) {
    case 1:
      return F[1] - K[1] * e[0] - K[0] * e[1];
    case 2:
      return F[2] - K[2] * e[0] - 2.0 * K[1] * e[1] - K[0] * e[2];
    case 3:
      return F[3] - K[3] * e[0] - 3.0 * K[2] * e[1] - 3.0 * K[1] * e[2] - K[0] * e[3];
    default:
      return ExplicitOde::total_derivative(m, t, xi, e);
  }
}

namespace {

[[noreturn]] void unknown_variant(const std::string& id, const std::string& variant) {
  throw Error(ErrorCode::UnknownVariant, "problem '" + id + "' has no variant '" + variant + "'");
}

Distribution pick(const std::string& id, const std::string& variant,
                  const std::vector<std::pair<std::string, Distribution>>& options) {
  for (const auto& [name, dist] : options)
    if (name == variant) return dist;
  unknown_variant(id, variant);
}

}  // namespace

std::vector<std::string> problem_variants(const std::string& id) {
  if (id == "p1") return {"uniform", "beta"};
  if (id == "p2") return {"uniform", "beta", "gamma"};
  if (id == "p3") return {"uniform", "beta"};
  if (id == "p4" || id == "p5") return {"uniform", "beta", "normal"};
  if (id == "p6") return {"default"};
  if (id == "highdim") return {"default"};
  throw Error(ErrorCode::UnknownVariant, "unknown problem '" + id + "'");
}

ProblemSpec make_problem(const std::string& id, const std::string& variant_in, int d) {
  ProblemSpec spec;
  spec.id = id;
  auto variants = problem_variants(id);
  spec.variant = variant_in.empty() ? variants.front() : variant_in;
  if (std::find(variants.begin(), variants.end(), spec.variant) == variants.end())
    unknown_variant(id, spec.variant);
  const std::string& v = spec.variant;
  spec.responses = {0};
  spec.response_names = {"u"};
  FscConfig& cfg = spec.defaults;
  cfg.dt = 1e-3;
  cfg.T = 10.0;
  cfg.M = 4;
  cfg.bootstrap.duration = 1.0;

  if (id == "p1") {
    const double m = 4.0, g = 9.81, v0 = 50.0;
    Distribution k = pick(id, v, {{"uniform", Distribution::uniform(1, 2)},
                                  {"beta", Distribution::beta(2, 5, 1, 2)}});
    spec.measure = ProductMeasure({k});
    spec.ode = std::make_shared<LinearOde>(
        1, 1, [=](const double* xi, double* a, double& c) { a[0] = -xi[0] / m; c = g; },
        [=](const double*, double* s) { s[0] = v0; }, "p1");
    spec.response_names = {"v"};
    spec.exact_response = [=](double t, const double* xi) {
      double vt = m * g / xi[0];
      return vt + (v0 - vt) * std::exp(-xi[0] * t / m);
    };
  } else if (id == "p2" || id == "p3") {
    const double u0 = 0.05, v0 = 0.20;
    Distribution k = pick(id, v, {{"uniform", Distribution::uniform(340, 460)},
                                  {"beta", Distribution::beta(2, 5, 340, 460)},
                                  {"gamma", Distribution::gamma(10, 0.1, 340)}});
    const bool two = id == "p3";
    if (two)
      spec.measure = ProductMeasure({Distribution::uniform(85, 115), k});
    else
      spec.measure = ProductMeasure({k});
    auto mass = [two](const double* xi) { return two ? xi[0] : 100.0; };
    auto stiff = [two](const double* xi) { return two ? xi[1] : xi[0]; };
    spec.ode = std::make_shared<LinearOde>(
        2, two ? 2 : 1,
        [=](const double* xi, double* a, double& c) {
          a[0] = -stiff(xi) / mass(xi);
          a[1] = 0.0;
          c = 0.0;
        },
        [=](const double*, double* s) {
          s[0] = u0;
          s[1] = v0;
        },
        id);
    spec.exact_response = [=](double t, const double* xi) {
      double w = std::sqrt(stiff(xi) / mass(xi));
      return u0 * std::cos(w * t) + v0 / w * std::sin(w * t);
    };
  } else if (id == "p4") {
    Distribution k = pick(id, v, {{"uniform", Distribution::uniform(2, 3)},
                                  {"beta", Distribution::beta(2, 5, 2, 3)},
                                  {"normal", Distribution::normal(2.5, 0.125)}});
    spec.measure = ProductMeasure({k});
    spec.ode = std::make_shared<LinearOde>(
        3, 1,
        [](const double* xi, double* a, double& c) {
          a[0] = -1.0;
          a[1] = -xi[0];
          a[2] = -0.5;
          c = 0.0;
        },
        [](const double*, double* s) {
          s[0] = 1.0;
          s[1] = -1.0;
          s[2] = 2.0;
        },
        "p4");
  } else if (id == "p5") {
    Distribution k = pick(id, v, {{"uniform", Distribution::uniform(3, 5)},
                                  {"beta", Distribution::beta(2, 5, 3, 5)},
                                  {"normal", Distribution::normal(4, 0.2)}});
    spec.measure = ProductMeasure({k});
    spec.ode = std::make_shared<LinearOde>(
        4, 1,
        [](const double* xi, double* a, double& c) {
          a[0] = -1.0;
          a[1] = 0.0;
          a[2] = -xi[0];
          a[3] = 0.0;
          c = 0.0;
        },
        [](const double*, double* s) {
          s[0] = 1.0;
          s[1] = -1.0;
          s[2] = 2.0;
          s[3] = -3.0;
        },
        "p5");
    spec.responses = {3};
    spec.response_names = {"jerk"};
  } else if (id == "p6") {
    spec.measure = ProductMeasure({Distribution::uniform(150, 450), Distribution::beta(2, 5, 0.05, 0.25)});
    spec.ode = std::make_shared<VanDerPolOde>();
    cfg.dt = 5e-3;
  } else {
    spec.d = d;
    auto ode = std::make_shared<HighDimOde>(d);
    std::vector<Distribution> f;
    for (int i = 0; i < d; ++i)
      f.push_back(i < 3 ? Distribution::beta(2, 5, -1, 1) : Distribution::uniform(-1, 1));
    spec.measure = ProductMeasure(f);
    spec.ode = ode;
    spec.requires_monte_carlo = true;
    cfg.dt = 1e-2;
    cfg.P = 3;
    cfg.bootstrap.duration = 0.0;
  }
  spec.d = static_cast<int>(spec.measure.dim());
  const int n = spec.ode->order();
  if (id == "p6")
    cfg.P = 4;
  else if (id != "highdim")
    cfg.P = n + 4;
  cfg.responses = spec.responses;
  for (const auto& dist : spec.measure.factors()) spec.gauss_points.push_back(default_gauss_points(dist));
  return spec;
}

MultiplicationTensor::MultiplicationTensor(const Basis& basis, const std::vector<RandomFunction>& input)
    : w_(basis.size()), r_(input.size()), data_(w_ * w_ * w_ * w_ * r_) {
  const std::size_t Q = basis.nodes();
  const auto& wts = basis.carrier()->weights();
  for (const auto& f : input) require_same_carrier(basis.carrier(), f.carrier());
  std::vector<double> prod(Q);
  for (std::size_t j = 0; j < w_; ++j)
    for (std::size_t k = j; k < w_; ++k)
      for (std::size_t l = k; l < w_; ++l)
        for (std::size_t m = 0; m < r_; ++m) {
          const double *pj = basis.values(j), *pk = basis.values(k), *pl = basis.values(l);
          const double* pm = input[m].data();
          for (std::size_t q = 0; q < Q; ++q) prod[q] = wts[q] * pj[q] * pk[q] * pl[q] * pm[q];
          for (std::size_t i = 0; i < w_; ++i) {
            const double* pi = basis.values(i);
            double s = 0.0;
            for (std::size_t q = 0; q < Q; ++q) s += prod[q] * pi[q];
            s /= basis.norm(i);
            const std::size_t perms[6][3] = {{j, k, l}, {j, l, k}, {k, j, l},
                                             {k, l, j}, {l, j, k}, {l, k, j}};
            for (const auto& p : perms) data_[(((i * w_ + p[0]) * w_ + p[1]) * w_ + p[2]) * r_ + m] = s;
          }
        }
}

MultiplicationTensor vdp_multiplication_tensor(const Basis& basis,
                                               const std::vector<RandomFunction>& input_basis) {
  return MultiplicationTensor(basis, input_basis);
}

std::vector<RandomFunction> vdp_input_basis(const NodeSetPtr& nodes) {
  RandomFunction one = RandomFunction::constant(nodes, 1.0);
  RandomFunction c = RandomFunction::from(nodes, [](const double* x) { return x[0]; });
  RandomFunction u = RandomFunction::from(nodes, [](const double* x) { return x[1]; });
  RandomFunction cc = c - RandomFunction::constant(nodes, c.mean());
  RandomFunction uc = u - RandomFunction::constant(nodes, u.mean());
  return {one, cc, uc};
}

std::vector<double> vdp_tensor_acceleration(const VanDerPolOde& ode, const MultiplicationTensor& T,
                                            const std::vector<double>& u, const std::vector<double>& v,
                                            const std::vector<double>& c_modes) {
  const std::size_t w = T.width(), r = T.inputs();
  std::vector<double> acc(w, 0.0);
  for (std::size_t i = 0; i < w; ++i) {
    double lin = 0.0, cubic = 0.0;
    for (std::size_t m = 0; m < r; ++m) {
      if (c_modes[m] == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) {
        lin += T(i, j, 0, 0, m) * v[j] * c_modes[m];
        for (std::size_t k = 0; k < w; ++k)
          for (std::size_t l = 0; l < w; ++l) cubic += T(i, j, k, l, m) * v[j] * u[k] * u[l] * c_modes[m];
      }
    }
    acc[i] = (lin - ode.rho * cubic - ode.k * u[i]) / ode.m;
  }
  return acc;
}

HighDimInputs highdim_inputs(int d, double t, const NodeSetPtr& nodes) {
  const std::size_t Q = nodes->size();
  std::vector<std::vector<double>> cols(10, std::vector<double>(Q));
  for (std::size_t q = 0; q < Q; ++q) {
    HighDimPoint p = highdim_point(d, t, nodes->point(q));
    for (int i = 0; i < 4; ++i) {
      cols[i][q] = p.k[i];
      cols[4 + i][q] = p.f[i];
    }
    cols[8][q] = p.u0;
    cols[9][q] = p.v0;
  }
  auto rf = [&](int i) { return RandomFunction(nodes, cols[i]); };
  return {rf(0), rf(1), rf(2), rf(3), rf(4), rf(5), rf(6), rf(7), rf(8), rf(9)};
}

std::vector<double> highdim_tensor_acceleration(int d, double t, const Basis& basis,
                                                const std::vector<double>& u) {
  HighDimInputs in = highdim_inputs(d, t, basis.carrier());
  const std::size_t w = basis.size(), Q = basis.nodes();
  const auto& wts = basis.carrier()->weights();
  std::vector<double> acc(w);
  for (std::size_t i = 0; i < w; ++i) {
    const double* pi = basis.values(i);
    double fi = 0.0;
    for (std::size_t q = 0; q < Q; ++q) fi += wts[q] * pi[q] * in.f[q];
    fi /= basis.norm(i);
    double ku = 0.0;
    for (std::size_t j = 0; j < w; ++j) {
      const double* pj = basis.values(j);
      double kij = 0.0;
      for (std::size_t q = 0; q < Q; ++q) kij += wts[q] * pi[q] * in.k[q] * pj[q];
      ku += kij / basis.norm(i) * u[j];
    }
    acc[i] = fi - ku;
  }
  return acc;
}

}  // namespace fsc
