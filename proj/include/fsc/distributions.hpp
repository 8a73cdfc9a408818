#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fsc {

class CounterStream;

enum class DistKind { Uniform, Beta, Gamma, Normal };

// Three-term recurrence of the monic polynomials orthogonal under a law:
//   p_{k+1}(x) = (x - alpha[k]) p_k(x) - beta[k] p_{k-1}(x),  beta[0] = 1.
struct Recurrence {
  std::vector<double> alpha;
  std::vector<double> beta;
};

class Distribution {
 public:
  static Distribution uniform(double a, double b);
  static Distribution beta(double alpha, double beta, double a, double b);
  // Shifted gamma with shape alpha and rate beta, support [a, inf).
  static Distribution gamma(double alpha, double beta, double a);
  static Distribution normal(double mu, double sigma);

  DistKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  double lower() const;
  double upper() const;

  double density(double x) const;
  double mean() const;
  double variance() const;
  // E[x^k] in closed form.
  double raw_moment(int k) const;
  // Inverse-transform or rejection draw from a counter stream.
  double draw(CounterStream& stream) const;

  Recurrence recurrence(int n) const;
  std::string describe() const;

  bool operator==(const Distribution& o) const {
    return kind_ == o.kind_ && params_ == o.params_;
  }

 private:
  Distribution(DistKind k, std::vector<double> p) : kind_(k), params_(std::move(p)) {}
  DistKind kind_;
  std::vector<double> params_;
};

// Parses e.g. "uniform(a=1,b=2)", "beta(alpha=2,beta=5,a=0.05,b=0.25)",
// "gamma(alpha=10,beta=0.1,a=340)", "normal(mu=0,sigma=1)".
Distribution parse_distribution(const std::string& text);

class ProductMeasure {
 public:
  ProductMeasure() = default;
  explicit ProductMeasure(std::vector<Distribution> factors);

  std::size_t dim() const { return factors_.size(); }
  const Distribution& operator[](std::size_t i) const { return factors_[i]; }
  const std::vector<Distribution>& factors() const { return factors_; }
  double density(const double* x) const;

 private:
  std::vector<Distribution> factors_;
};

// Point q of the result occupies [q*d, (q+1)*d). Sample q of coordinate i draws
// only from stream (seed, q, i), so any subrange can be regenerated on its own.
std::vector<double> sample(const ProductMeasure& measure, std::size_t count, std::uint64_t seed,
                           std::size_t first = 0);

}  // namespace fsc
