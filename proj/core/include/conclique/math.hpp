#pragma once

#include <span>

namespace conclique::math {

// log(p / (1-p)); requires 0 < p < 1.
double logit(double p);

// 1 / (1 + exp(-x)).  Evaluated through exp(-|x|) so it neither overflows
// nor loses precision for large |x|; exact 0/1 saturation only happens once
// exp underflows (|x| > ~745).
double logistic(double x);

// log(1 + exp(x)) without overflow.
double log1pexp(double x);

// Inverse of the standard normal CDF, full double precision (relative error
// below 1e-15 over (0,1)).  u must lie strictly inside (0,1).
double normal_quantile(double u);

// Standard normal CDF via erfc.
double normal_cdf(double z);

// Survival function of the Kolmogorov distribution: P(sup_t |B(t)| > lambda)
// for a Brownian bridge B.  Series form; switches representation near the
// origin so both tails converge fast.
double kolmogorov_sf(double lambda);

// Dense symmetric positive definite solve helpers used by the exact Gaussian
// reference code.  Matrices are row-major n x n.
// Cholesky factorization in place (lower triangle); throws NumericalError if
// the matrix is not numerically positive definite.
void cholesky_in_place(std::span<double> a, int n);
// Solves L L^T x = b given the factor from cholesky_in_place.
void cholesky_solve(std::span<const double> l, int n, std::span<double> b);

}  // namespace conclique::math
