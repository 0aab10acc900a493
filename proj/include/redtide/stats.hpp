#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace redtide::stats {

/// Sample Pearson correlation. Throws std::invalid_argument on length
/// mismatch, n < 3, or zero variance in either series — an undefined
/// correlation is an error, never a silent 0.
double pearson(std::span<const double> x, std::span<const double> y);

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double p_value = 1.0;  // two-sided t test on the slope
    size_t n = 0;
};

/// Least squares of y on x via the closed-form normal equations.
/// Throws on n < 3 or zero variance in x.
OlsFit ols(std::span<const double> x, std::span<const double> y);

double normal_cdf(double z);
double normal_quantile(double p);
double student_t_sf(double t, double df);       // P(T > t)
double student_t_quantile(double p, double df);

/// CDF and quantile of the studentized range distribution with k groups
/// and df error degrees of freedom, evaluated by Gauss-Legendre
/// quadrature of the classical double-integral form. For k = 2 the
/// quantile equals sqrt(2) times the two-sided t quantile, which the
/// tests use as an independent cross-check.
double studentized_range_cdf(double q, int k, double df);
double studentized_range_quantile(double p, int k, double df);

struct TukeyContrast {
    size_t group_a = 0;
    size_t group_b = 0;
    double diff = 0.0;  // mean_a - mean_b
    double lower = 0.0;
    double upper = 0.0;
};

/// Tukey HSD pairwise confidence intervals with pooled variance and the
/// studentized-range quantile at confidence 1 - alpha. Throws when a
/// group is empty or there are no error degrees of freedom.
std::vector<TukeyContrast> tukey_contrasts(const std::vector<std::vector<double>>& groups,
                                           double alpha = 0.05);

double mean(std::span<const double> xs);

}  // namespace redtide::stats
