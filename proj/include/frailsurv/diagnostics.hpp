#pragma once

#include <span>
#include <string>
#include <vector>

#include "frailsurv/bayes.hpp"

namespace frailsurv {

// Moment and quantile summary of one posterior series.
struct SeriesSummary {
    double mean = 0.0;
    double sd = 0.0;       // sample sd, n-1 denominator
    double lower = 0.0;    // 2.5% quantile
    double upper = 0.0;    // 97.5% quantile
};

SeriesSummary summarize(std::span<const double> series);

// Linear-interpolation quantile (R type 7). q in [0,1].
double quantile(std::span<const double> series, double q);

// Geweke convergence score: compares the first `frac_a` and last `frac_b`
// segments of the series with a spectral variance estimate from batch means.
struct GewekeResult {
    double z = 0.0;
    double p_value = 1.0;  // two-sided
};

GewekeResult geweke(std::span<const double> series, double frac_a = 0.1, double frac_b = 0.5);

// Gelman-Rubin potential scale reduction factor for one parameter across
// chains. Chains are truncated to the shortest length. Needs >= 2 chains.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

// One row of the fit summary table.
struct PosteriorSummary {
    std::string name;
    double estimate = 0.0;  // posterior mean
    double se = 0.0;        // posterior sd
    double lower = 0.0;     // 2.5% quantile
    double upper = 0.0;     // 97.5% quantile
    double geweke_z = 0.0;
    double geweke_p = 1.0;
    double psrf = 1.0;      // Gelman-Rubin, NaN when only one chain
};

// Summaries for every parameter: moments/quantiles/Geweke from the first
// chain, PSRF across all chains (NaN if only one).
std::vector<PosteriorSummary> summarize_fit(const std::vector<Chain>& chains);

}  // namespace frailsurv
