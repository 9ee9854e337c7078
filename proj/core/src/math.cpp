#include "conclique/math.hpp"

#include <cmath>
#include <cstddef>

#include "conclique/common.hpp"

namespace conclique::math {

double logit(double p) { return std::log(p / (1.0 - p)); }

double logistic(double x) {
  const double t = std::exp(-std::fabs(x));
  return x >= 0.0 ? 1.0 / (1.0 + t) : t / (1.0 + t);
}

double log1pexp(double x) {
  if (x > 33.3) return x;
  if (x > -37.0) return std::log1p(std::exp(x));
  return std::exp(x);
}

namespace {

// Rational minimax approximations on three ranges of the transformed
// argument; worst relative error about 1e-16.
double quantile_central(double q) {
  const double r = 0.180625 - q * q;
  const double num =
      (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
            6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
          1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
        1.3314166789178437745e2) * r + 3.3871328727963666080e0);
  const double den =
      (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
            3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
          5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
        4.2313330701600911252e1) * r + 1.0);
  return q * num / den;
}

double quantile_middle(double s) {  // s = sqrt(-log(min(u,1-u))) - 1.6
  const double num =
      (((((((7.74545014278341407640e-4 * s + 2.27238449892691845833e-2) * s +
            2.41780725177450611770e-1) * s + 1.27045825245236838258e0) * s +
          3.64784832476320460504e0) * s + 5.76949722146069140550e0) * s +
        4.63033784615654529590e0) * s + 1.42343711074968357734e0);
  const double den =
      (((((((1.05075007164441684324e-9 * s + 5.47593808499534494600e-4) * s +
            1.51986665636164571966e-2) * s + 1.48103976427480074590e-1) * s +
          6.89767334985100004550e-1) * s + 1.67638483018380384940e0) * s +
        2.05319162663775882187e0) * s + 1.0);
  return num / den;
}

double quantile_far(double s) {  // s = sqrt(-log(min(u,1-u))) - 5
  const double num =
      (((((((2.01033439929228813265e-7 * s + 2.71155556874348757815e-5) * s +
            1.24266094738807843860e-3) * s + 2.65321895265761230930e-2) * s +
          2.96560571828504891230e-1) * s + 1.78482653991729133580e0) * s +
        5.46378491116411436990e0) * s + 6.65790464350110377720e0);
  const double den =
      (((((((2.04426310338993978564e-15 * s + 1.42151175831644588870e-7) * s +
            1.84631831751005468180e-5) * s + 7.86869131145613259100e-4) * s +
          1.48753612908506148525e-2) * s + 1.36929880922735805310e-1) * s +
        5.99832206555887937690e-1) * s + 1.0);
  return num / den;
}

}  // namespace

double normal_quantile(double u) {
  const double q = u - 0.5;
  if (std::fabs(q) <= 0.425) return quantile_central(q);
  const double tail = q < 0.0 ? u : 1.0 - u;
  const double r = std::sqrt(-std::log(tail));
  const double z = r <= 5.0 ? quantile_middle(r - 1.6) : quantile_far(r - 5.0);
  return q < 0.0 ? -z : z;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730951); }

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi theta form of the CDF; converges in a couple of terms here.
    const double x = 1.2337005501361697 / (lambda * lambda);  // pi^2 / 8
    double sum = 0.0;
    for (int k = 1; k < 40; k += 2) {
      const double term = std::exp(-static_cast<double>(k) * k * x);
      sum += term;
      if (term < 1e-22 * sum) break;
    }
    const double cdf = 2.5066282746310002 / lambda * sum;  // sqrt(2 pi)
    return 1.0 - cdf;
  }
  const double l2 = lambda * lambda;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double term = std::exp(-2.0 * static_cast<double>(k) * k * l2);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-22) break;
  }
  return std::fmax(0.0, 2.0 * sum);
}

void cholesky_in_place(std::span<double> a, int n) {
  for (int j = 0; j < n; ++j) {
    double d = a[static_cast<std::size_t>(j) * n + j];
    for (int k = 0; k < j; ++k) {
      const double l = a[static_cast<std::size_t>(j) * n + k];
      d -= l * l;
    }
    if (!(d > 0.0)) throw NumericalError("matrix is not positive definite");
    const double root = std::sqrt(d);
    a[static_cast<std::size_t>(j) * n + j] = root;
    for (int i = j + 1; i < n; ++i) {
      double s = a[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        s -= a[static_cast<std::size_t>(i) * n + k] *
             a[static_cast<std::size_t>(j) * n + k];
      a[static_cast<std::size_t>(i) * n + j] = s / root;
    }
  }
  // zero the strict upper triangle so the factor is usable as-is
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = 0.0;
}

void cholesky_solve(std::span<const double> l, int n, std::span<double> b) {
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l[static_cast<std::size_t>(i) * n + k] * b[k];
    b[i] = s / l[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= l[static_cast<std::size_t>(k) * n + i] * b[k];
    b[i] = s / l[static_cast<std::size_t>(i) * n + i];
  }
}

}  // namespace conclique::math
