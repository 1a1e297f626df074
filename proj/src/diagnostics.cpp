#include "frailsurv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "frailsurv/mathutil.hpp"

namespace frailsurv {

namespace {

double mean_of(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / double(xs.size());
}

double sample_variance(std::span<const double> xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return s / double(xs.size() - 1);
}

// Variance of the segment mean via batch means: split into ceil(sqrt(m))
// batches and use var(batch means)/batches. Returns the segment mean too.
struct SegmentStats {
    double mean = 0.0;
    double var_of_mean = 0.0;
};

SegmentStats batch_means(std::span<const double> xs) {
    const std::size_t m = xs.size();
    const std::size_t batches = std::size_t(std::ceil(std::sqrt(double(m))));
    const std::size_t len = m / batches;
    if (len == 0) throw std::invalid_argument("geweke: segment too short");
    const std::size_t used = batches * len;
    std::vector<double> means(batches);
    for (std::size_t b = 0; b < batches; ++b)
        means[b] = mean_of(xs.subspan(b * len, len));
    SegmentStats out;
    out.mean = mean_of({xs.data(), used});
    out.var_of_mean = sample_variance(means, mean_of(means)) / double(batches);
    return out;
}

}  // namespace

double quantile(std::span<const double> series, double q) {
    if (series.empty()) throw std::invalid_argument("quantile: empty series");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q must lie in [0,1]");
    std::vector<double> sorted(series.begin(), series.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = q * double(sorted.size() - 1);
    const std::size_t lo = std::size_t(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - double(lo)) * (sorted[lo + 1] - sorted[lo]);
}

SeriesSummary summarize(std::span<const double> series) {
    if (series.empty()) throw std::invalid_argument("summarize: empty series");
    SeriesSummary s;
    s.mean = mean_of(series);
    s.sd = std::sqrt(sample_variance(series, s.mean));
    s.lower = quantile(series, 0.025);
    s.upper = quantile(series, 0.975);
    return s;
}

GewekeResult geweke(std::span<const double> series, double frac_a, double frac_b) {
    if (!(frac_a > 0.0 && frac_b > 0.0 && frac_a + frac_b <= 1.0))
        throw std::invalid_argument("geweke: fractions must be positive with sum <= 1");
    const std::size_t n = series.size();
    if (n < 100) throw std::invalid_argument("geweke: need at least 100 draws");
    const std::size_t na = std::size_t(std::floor(frac_a * double(n)));
    const std::size_t nb = std::size_t(std::floor(frac_b * double(n)));
    if (na < 2 || nb < 2) throw std::invalid_argument("geweke: series too short");

    const SegmentStats a = batch_means(series.first(na));
    const SegmentStats b = batch_means(series.last(nb));

    GewekeResult r;
    const double denom = std::sqrt(a.var_of_mean + b.var_of_mean);
    const double diff = a.mean - b.mean;
    if (denom == 0.0) {
        // flat segments: identical means count as converged
        r.z = diff == 0.0 ? 0.0 : (diff > 0.0 ? kPosInf : kNegInf);
    } else {
        r.z = diff / denom;
    }
    r.p_value = two_sided_normal_p(r.z);
    return r;
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
    const std::size_t m = chains.size();
    if (m < 2) throw std::invalid_argument("gelman_rubin: need at least two chains");
    std::size_t n = chains.front().size();
    for (const auto& c : chains) n = std::min(n, c.size());
    if (n < 10) throw std::invalid_argument("gelman_rubin: chains too short");

    std::vector<double> chain_means(m);
    double within = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const std::span<const double> xs{chains[j].data(), n};
        chain_means[j] = mean_of(xs);
        within += sample_variance(xs, chain_means[j]);
    }
    within /= double(m);
    const double grand = mean_of(chain_means);
    double between = 0.0;  // B/n in the usual notation
    for (double mu : chain_means) between += (mu - grand) * (mu - grand);
    between /= double(m - 1);

    if (within == 0.0) return between == 0.0 ? 1.0 : kPosInf;
    const double pooled = (double(n - 1) / double(n)) * within + between;
    return std::sqrt(pooled / within);
}

std::vector<PosteriorSummary> summarize_fit(const std::vector<Chain>& chains) {
    if (chains.empty()) throw std::invalid_argument("summarize_fit: no chains");
    const Chain& head = chains.front();
    if (head.draws.empty()) throw std::invalid_argument("summarize_fit: empty chain");
    for (const auto& c : chains)
        if (c.param_names != head.param_names)
            throw std::invalid_argument("summarize_fit: chains disagree on parameters");

    std::vector<PosteriorSummary> rows;
    rows.reserve(head.dim());
    for (std::size_t i = 0; i < head.dim(); ++i) {
        PosteriorSummary row;
        row.name = head.param_names[i];
        const std::vector<double> series = head.series(i);
        const SeriesSummary s = summarize(series);
        row.estimate = s.mean;
        row.se = s.sd;
        row.lower = s.lower;
        row.upper = s.upper;
        const GewekeResult g = geweke(series);
        row.geweke_z = g.z;
        row.geweke_p = g.p_value;
        if (chains.size() >= 2) {
            std::vector<std::vector<double>> per_chain;
            per_chain.reserve(chains.size());
            for (const auto& c : chains) per_chain.push_back(c.series(i));
            row.psrf = gelman_rubin(per_chain);
        } else {
            row.psrf = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace frailsurv
