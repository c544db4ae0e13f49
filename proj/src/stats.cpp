#include "tscp/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>

namespace tscp {

double RunningStat::variance() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double v = (sumsq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    return std::max(v, 0.0);
}

double RunningStat::se() const {
    return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

double binomial_se(double p_hat, long n) {
    if (n <= 0) return 0.0;
    return std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / static_cast<double>(n));
}

double chi_squared_sf(double statistic, double dof) {
    if (dof <= 0.0) return 1.0;
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, std::max(statistic, 0.0)));
}

GofResult poisson_gof(const std::vector<long>& counts, double mean) {
    GofResult result;
    const long n = static_cast<long>(counts.size());
    if (n == 0 || mean <= 0.0) return result;

    long max_count = 0;
    for (long c : counts) max_count = std::max(max_count, c);

    // Poisson pmf by forward recurrence.
    std::vector<double> pmf(static_cast<std::size_t>(max_count) + 1);
    pmf[0] = std::exp(-mean);
    for (long k = 1; k <= max_count; ++k)
        pmf[static_cast<std::size_t>(k)] =
            pmf[static_cast<std::size_t>(k - 1)] * mean / static_cast<double>(k);

    std::vector<long> observed(pmf.size(), 0);
    for (long c : counts) ++observed[static_cast<std::size_t>(c)];

    // Merge low-expectation cells from both tails; the final cell absorbs
    // the whole upper tail mass 1 - sum(pmf).
    struct Cell {
        double expected;
        long observed;
    };
    std::vector<Cell> cells;
    double tail_mass = 1.0;
    for (double p : pmf) tail_mass -= p;
    tail_mass = std::max(tail_mass, 0.0);

    Cell current{0.0, 0};
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        current.expected += pmf[k] * static_cast<double>(n);
        current.observed += observed[k];
        if (current.expected >= 5.0) {
            cells.push_back(current);
            current = {0.0, 0};
        }
    }
    current.expected += tail_mass * static_cast<double>(n);
    if (!cells.empty() && current.expected < 5.0) {
        cells.back().expected += current.expected;
        cells.back().observed += current.observed;
    } else {
        cells.push_back(current);
    }
    if (cells.size() < 2) return result;

    double statistic = 0.0;
    for (const Cell& cell : cells) {
        const double d = static_cast<double>(cell.observed) - cell.expected;
        statistic += d * d / cell.expected;
    }
    result.statistic = statistic;
    result.cells = cells.size();
    result.dof = static_cast<double>(cells.size() - 1);
    result.p_value = chi_squared_sf(statistic, result.dof);
    return result;
}

double binomial_test_pvalue(long successes, long trials, double p0) {
    if (trials <= 0) return 1.0;
    const double se = std::sqrt(p0 * (1.0 - p0) / static_cast<double>(trials));
    if (se == 0.0) return 1.0;
    const double z =
        (static_cast<double>(successes) / static_cast<double>(trials) - p0) / se;
    boost::math::normal dist;
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(z)));
}

}  // namespace tscp
