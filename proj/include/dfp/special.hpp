#ifndef DFP_SPECIAL_HPP_
#define DFP_SPECIAL_HPP_

namespace dfp {

// Regularized incomplete beta I_x(a,b), continued-fraction evaluation,
// relative tolerance 1e-12. Also the CDF of Beta(a,b) at x.
double reg_inc_beta(double a, double b, double x);

double beta_cdf(double x, double a, double b);

// Regularized lower incomplete gamma P(a,x).
double reg_inc_gamma_lower(double a, double x);

// Survival function of the chi-square distribution with k dof.
double chi_square_sf(double x, double k);

// Standard normal CDF.
double normal_cdf(double x);

// Asymptotic Kolmogorov distribution: P(sqrt(n) * D_n <= x).
double kolmogorov_cdf(double x);

// Two-sided KS-test p-value for a sample of size n with statistic d
// against a fully specified continuous CDF (asymptotic).
double ks_pvalue(double d, int n);

}  // namespace dfp

#endif  // DFP_SPECIAL_HPP_
