#pragma once

#include <cstddef>
#include <vector>

namespace tscp {

// Mergeable sufficient statistics (count, sum, sum of squares). Estimators
// built from these are independent of accumulation order up to floating
// rounding; replica aggregation sums them in replica-index order to keep
// emitted bytes identical across thread counts.
struct RunningStat {
    long n = 0;
    double sum = 0.0;
    double sumsq = 0.0;

    void add(double value) {
        ++n;
        sum += value;
        sumsq += value * value;
    }
    void merge(const RunningStat& other) {
        n += other.n;
        sum += other.sum;
        sumsq += other.sumsq;
    }
    double mean() const { return n > 0 ? sum / static_cast<double>(n) : 0.0; }
    double variance() const;  // unbiased; 0 for n < 2
    double se() const;        // standard error of the mean
};

double binomial_se(double p_hat, long n);

// Upper tail of the chi-squared distribution.
double chi_squared_sf(double statistic, double dof);

// Goodness of fit of observed nonnegative integer counts against a Poisson
// law with the given mean. Cells with small expected mass are merged into
// the tails so every cell carries expectation >= 5.
struct GofResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
    std::size_t cells = 0;
};
GofResult poisson_gof(const std::vector<long>& counts, double mean);

// Two-sided binomial z-test p-value with normal approximation.
double binomial_test_pvalue(long successes, long trials, double p0);

}  // namespace tscp
