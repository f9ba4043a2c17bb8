#ifndef AGRS_SPECFUN_HPP
#define AGRS_SPECFUN_HPP

namespace agrs {

// Standard normal CDF. Absolute error below 1e-12 over the real line.
double std_normal_cdf(double x);

// Inverse of std_normal_cdf on (0, 1). Throws std::domain_error outside.
double std_normal_quantile(double p);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_lower_gamma(double a, double x);

// CDF of the noncentral chi-square distribution with `dof` degrees of
// freedom and noncentrality `lambda`, evaluated by a Poisson-weighted sum
// of central chi-square CDFs expanded both ways from the modal index.
double noncentral_chisq_cdf(int dof, double lambda, double x);

}  // namespace agrs

#endif
