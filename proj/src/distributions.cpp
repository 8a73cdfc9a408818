#include "fsc/distributions.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <regex>
#include <sstream>

#include "fsc/error.hpp"
#include "fsc/rng.hpp"

namespace fsc {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorCode::InvalidParameters, msg);
}

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// E[(s + h Y)^k] from the raw moments of Y.
double affine_moment(double s, double h, int k, const std::vector<double>& ym) {
  double sum = 0.0;
  for (int j = 0; j <= k; ++j)
    sum += binomial(k, j) * std::pow(s, k - j) * std::pow(h, j) * ym[j];
  return sum;
}

double gamma_variate(double alpha, CounterStream& s) {
  if (alpha < 1.0) {
    double g = gamma_variate(alpha + 1.0, s);
    return g * std::pow(s.uniform(), 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = s.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = s.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

Distribution Distribution::uniform(double a, double b) {
  require(finite_all({a, b}) && a < b, "uniform requires a < b");
  return Distribution(DistKind::Uniform, {a, b});
}

Distribution Distribution::beta(double alpha, double beta, double a, double b) {
  require(finite_all({alpha, beta, a, b}) && a < b, "beta requires a < b");
  require(alpha > 0 && beta > 0, "beta requires alpha > 0 and beta > 0");
  return Distribution(DistKind::Beta, {alpha, beta, a, b});
}

Distribution Distribution::gamma(double alpha, double beta, double a) {
  require(finite_all({alpha, beta, a}), "gamma parameters must be finite");
  require(alpha > 0 && beta > 0, "gamma requires alpha > 0 and beta > 0");
  return Distribution(DistKind::Gamma, {alpha, beta, a});
}

Distribution Distribution::normal(double mu, double sigma) {
  require(finite_all({mu, sigma}) && sigma > 0, "normal requires sigma > 0");
  return Distribution(DistKind::Normal, {mu, sigma});
}

double Distribution::lower() const {
  switch (kind_) {
    case DistKind::Uniform:
      return params_[0];
    case DistKind::Beta:
    case DistKind::Gamma:
      return params_[2];
    case DistKind::Normal:
      return -std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double Distribution::upper() const {
  switch (kind_) {
    case DistKind::Uniform:
      return params_[1];
    case DistKind::Beta:
      return params_[3];
    default:
      return std::numeric_limits<double>::infinity();
  }
}

double Distribution::density(double x) const {
  const auto& p = params_;
  switch (kind_) {
    case DistKind::Uniform:
      return (x < p[0] || x > p[1]) ? 0.0 : 1.0 / (p[1] - p[0]);
    case DistKind::Beta: {
      double al = p[0], be = p[1], a = p[2], b = p[3];
      if (x < a || x > b) return 0.0;
      double logB = std::lgamma(al) + std::lgamma(be) - std::lgamma(al + be);
      return std::pow(x - a, al - 1.0) * std::pow(b - x, be - 1.0) /
             (std::pow(b - a, al + be - 1.0) * std::exp(logB));
    }
    case DistKind::Gamma: {
      double al = p[0], be = p[1], a = p[2];
      if (x < a) return 0.0;
      double y = x - a;
      return std::exp(al * std::log(be) - std::lgamma(al) - be * y) * std::pow(y, al - 1.0);
    }
    case DistKind::Normal: {
      double z = (x - p[0]) / p[1];
      return std::exp(-0.5 * z * z) / (p[1] * std::sqrt(2.0 * std::numbers::pi));
    }
  }
  return 0.0;
}

double Distribution::mean() const { return raw_moment(1); }

double Distribution::variance() const {
  double m = raw_moment(1);
  switch (kind_) {
    case DistKind::Uniform:
      return (params_[1] - params_[0]) * (params_[1] - params_[0]) / 12.0;
    case DistKind::Beta: {
      double al = params_[0], be = params_[1], w = params_[3] - params_[2];
      return w * w * al * be / ((al + be) * (al + be) * (al + be + 1.0));
    }
    case DistKind::Gamma:
      return params_[0] / (params_[1] * params_[1]);
    case DistKind::Normal:
      return params_[1] * params_[1];
  }
  return raw_moment(2) - m * m;
}

double Distribution::raw_moment(int k) const {
  const auto& p = params_;
  std::vector<double> ym(k + 1, 1.0);
  switch (kind_) {
    case DistKind::Uniform: {
      double a = p[0], b = p[1];
      return (std::pow(b, k + 1) - std::pow(a, k + 1)) / ((k + 1) * (b - a));
    }
    case DistKind::Beta:
      for (int j = 1; j <= k; ++j) ym[j] = ym[j - 1] * (p[0] + j - 1) / (p[0] + p[1] + j - 1);
      return affine_moment(p[2], p[3] - p[2], k, ym);
    case DistKind::Gamma:
      for (int j = 1; j <= k; ++j) ym[j] = ym[j - 1] * (p[0] + j - 1);
      return affine_moment(p[2], 1.0 / p[1], k, ym);
    case DistKind::Normal:
      for (int j = 1; j <= k; ++j) ym[j] = (j % 2) ? 0.0 : ym[j - 2] * (j - 1);
      return affine_moment(p[0], p[1], k, ym);
  }
  return 0.0;
}

double Distribution::draw(CounterStream& s) const {
  const auto& p = params_;
  switch (kind_) {
    case DistKind::Uniform:
      return p[0] + (p[1] - p[0]) * s.uniform();
    case DistKind::Beta:
      return p[2] + (p[3] - p[2]) * boost::math::ibeta_inv(p[0], p[1], s.uniform());
    case DistKind::Gamma:
      return p[2] + gamma_variate(p[0], s) / p[1];
    case DistKind::Normal:
      return p[0] + p[1] * s.normal();
  }
  return 0.0;
}

Recurrence Distribution::recurrence(int n) const {
  Recurrence r;
  r.alpha.resize(n);
  r.beta.resize(n);
  const auto& p = params_;
  switch (kind_) {
    case DistKind::Uniform: {
      double c = 0.5 * (p[0] + p[1]), h = 0.5 * (p[1] - p[0]);
      for (int k = 0; k < n; ++k) {
        r.alpha[k] = c;
        r.beta[k] = k == 0 ? 1.0 : h * h * k * k / (4.0 * k * k - 1.0);
      }
      break;
    }
    case DistKind::Beta: {
      // Jacobi weight (1-t)^A (1+t)^B on [-1,1], mapped affinely onto [a,b].
      double A = p[1] - 1.0, B = p[0] - 1.0;
      double c = 0.5 * (p[2] + p[3]), h = 0.5 * (p[3] - p[2]);
      for (int k = 0; k < n; ++k) {
        double s = 2.0 * k + A + B;
        double al = k == 0 ? (B - A) / (A + B + 2.0) : (B * B - A * A) / (s * (s + 2.0));
        double be;
        if (k == 0)
          be = 1.0;
        else if (k == 1)
          be = 4.0 * (1.0 + A) * (1.0 + B) / ((2.0 + A + B) * (2.0 + A + B) * (3.0 + A + B));
        else
          be = 4.0 * k * (k + A) * (k + B) * (k + A + B) / (s * s * (s + 1.0) * (s - 1.0));
        r.alpha[k] = c + h * al;
        r.beta[k] = k == 0 ? 1.0 : h * h * be;
      }
      break;
    }
    case DistKind::Gamma: {
      double A = p[0] - 1.0, rate = p[1], a = p[2];
      for (int k = 0; k < n; ++k) {
        r.alpha[k] = a + (2.0 * k + A + 1.0) / rate;
        r.beta[k] = k == 0 ? 1.0 : k * (k + A) / (rate * rate);
      }
      break;
    }
    case DistKind::Normal:
      for (int k = 0; k < n; ++k) {
        r.alpha[k] = p[0];
        r.beta[k] = k == 0 ? 1.0 : p[1] * p[1] * k;
      }
      break;
  }
  return r;
}

std::string Distribution::describe() const {
  std::ostringstream os;
  os.precision(17);
  const auto& p = params_;
  switch (kind_) {
    case DistKind::Uniform:
      os << "uniform(a=" << p[0] << ",b=" << p[1] << ")";
      break;
    case DistKind::Beta:
      os << "beta(alpha=" << p[0] << ",beta=" << p[1] << ",a=" << p[2] << ",b=" << p[3] << ")";
      break;
    case DistKind::Gamma:
      os << "gamma(alpha=" << p[0] << ",beta=" << p[1] << ",a=" << p[2] << ")";
      break;
    case DistKind::Normal:
      os << "normal(mu=" << p[0] << ",sigma=" << p[1] << ")";
      break;
  }
  return os.str();
}

Distribution parse_distribution(const std::string& text) {
  static const std::regex outer(R"(^\s*([A-Za-z]+)\s*\((.*)\)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, outer))
    throw Error(ErrorCode::ConfigError, "cannot parse distribution '" + text + "'");
  std::string name = m[1];
  for (auto& ch : name) ch = static_cast<char>(std::tolower(ch));
  std::map<std::string, double> kv;
  std::stringstream body(m[2].str());
  std::string item;
  while (std::getline(body, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigError, "expected key=value in '" + text + "'");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    std::string key = trim(item.substr(0, eq));
    std::string val = trim(item.substr(eq + 1));
    try {
      std::size_t used = 0;
      kv[key] = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "bad number '" + val + "' in '" + text + "'");
    }
  }
  auto get = [&](const char* key, double def, bool required) {
    auto it = kv.find(key);
    if (it == kv.end()) {
      if (required)
        throw Error(ErrorCode::ConfigError, std::string("missing '") + key + "' in '" + text + "'");
      return def;
    }
    double v = it->second;
    kv.erase(it);
    return v;
  };
  auto finish = [&](Distribution d) {
    if (!kv.empty())
      throw Error(ErrorCode::ConfigError, "unknown key '" + kv.begin()->first + "' in '" + text + "'");
    return d;
  };
  if (name == "uniform") {
    double a = get("a", 0, true), b = get("b", 0, true);
    return finish(Distribution::uniform(a, b));
  }
  if (name == "beta") {
    double al = get("alpha", 0, true), be = get("beta", 0, true);
    double a = get("a", 0.0, false), b = get("b", 1.0, false);
    return finish(Distribution::beta(al, be, a, b));
  }
  if (name == "gamma") {
    double al = get("alpha", 0, true), be = get("beta", 0, true), a = get("a", 0.0, false);
    return finish(Distribution::gamma(al, be, a));
  }
  if (name == "normal") {
    double mu = get("mu", 0, true), sigma = get("sigma", 0, true);
    return finish(Distribution::normal(mu, sigma));
  }
  throw Error(ErrorCode::ConfigError, "unknown distribution '" + name + "'");
}

ProductMeasure::ProductMeasure(std::vector<Distribution> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw Error(ErrorCode::InvalidParameters, "product measure needs d >= 1");
}

double ProductMeasure::density(const double* x) const {
  double f = 1.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) f *= factors_[i].density(x[i]);
  return f;
}

std::vector<double> sample(const ProductMeasure& measure, std::size_t count, std::uint64_t seed,
                           std::size_t first) {
  if (count < 1) throw Error(ErrorCode::InvalidParameters, "sample count must be >= 1");
  const std::size_t d = measure.dim();
  std::vector<double> out(count * d);
  for (std::size_t q = 0; q < count; ++q)
    for (std::size_t i = 0; i < d; ++i) {
      CounterStream s(seed, first + q, static_cast<std::uint32_t>(i));
      out[q * d + i] = measure[i].draw(s);
    }
  return out;
}

}  // namespace fsc
