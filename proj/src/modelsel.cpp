#include "frailsurv/modelsel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frailsurv/baseline.hpp"
#include "frailsurv/frailty.hpp"
#include "frailsurv/mathutil.hpp"

namespace frailsurv {

InfoCriteria info_criteria(double log_likelihood, std::size_t k, std::size_t n) {
    if (n < 3) throw std::invalid_argument("info_criteria: need at least three records");
    if (!std::isfinite(log_likelihood))
        throw std::invalid_argument("info_criteria: log-likelihood must be finite");
    InfoCriteria ic;
    const double kk = double(k);
    const double nn = double(n);
    ic.aic = 2.0 * kk - 2.0 * log_likelihood;
    ic.bic = kk * std::log(nn) - 2.0 * log_likelihood;
    if (n > k + 1) ic.aicc = ic.aic + 2.0 * kk * (kk + 1.0) / (nn - kk - 1.0);
    ic.hqic = 2.0 * kk * std::log(std::log(nn)) - 2.0 * log_likelihood;
    return ic;
}

std::vector<KmPoint> kaplan_meier(std::span<const SurvivalRecord> data) {
    validate_records(data);
    std::vector<std::pair<double, int>> obs;
    obs.reserve(data.size());
    for (const auto& r : data) obs.emplace_back(r.time, r.status);
    std::sort(obs.begin(), obs.end());

    std::vector<KmPoint> curve;
    double survival = 1.0;
    std::size_t i = 0;
    const std::size_t n = obs.size();
    while (i < n) {
        const double t = obs[i].first;
        std::size_t events = 0;
        std::size_t j = i;
        while (j < n && obs[j].first == t) {
            events += std::size_t(obs[j].second);
            ++j;
        }
        if (events > 0) {
            const std::size_t at_risk = n - i;
            survival *= 1.0 - double(events) / double(at_risk);
            curve.push_back({t, at_risk, events, survival});
        }
        i = j;
    }
    return curve;
}

double model_average_survival(ModelKind kind, std::span<const SurvivalRecord> data,
                              const ModelParams& params, double t) {
    validate_records(data);
    params.validate(kind, data.front().covariates.size());
    double total = 0.0;
    for (const auto& r : data) {
        const double rho = linear_predictor(r.covariates, params.beta);
        total += unconditional_survival(kind, t, params, rho);
    }
    return total / double(data.size());
}

double kolmogorov_p(double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("kolmogorov_p: lambda must be >= 0");
    if (lambda == 0.0) return 1.0;
    // complementary CDF of the Kolmogorov distribution; the two series
    // converge fastest on opposite sides of lambda ~ 1.18
    if (lambda < 1.18) {
        const double factor = std::sqrt(2.0 * kPi) / lambda;
        const double v = std::exp(-kPi * kPi / (8.0 * lambda * lambda));
        double cdf = 0.0;
        for (int j = 1; j <= 41; j += 2) cdf += std::pow(v, j * j);
        cdf *= factor;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double tail = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * double(j) * double(j) * lambda * lambda);
        tail += sign * term;
        sign = -sign;
        if (term < 1e-300) break;
    }
    return std::clamp(2.0 * tail, 0.0, 1.0);
}

KsResult ks_gof(ModelKind kind, std::span<const SurvivalRecord> data, const ModelParams& params) {
    const std::vector<KmPoint> km = kaplan_meier(data);
    std::size_t n_events = 0;
    for (const auto& pt : km) n_events += pt.events;
    if (n_events < 5) throw std::invalid_argument("ks_gof: need at least five events");
    double d = 0.0;
    for (const auto& pt : km) {
        const double model = model_average_survival(kind, data, params, pt.time);
        d = std::max(d, std::abs(pt.survival - model));
    }
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_p(std::sqrt(double(n_events)) * d);
    return r;
}

std::vector<PlotPoint> plot_data(ModelKind kind, std::span<const SurvivalRecord> data,
                                 const ModelParams& params) {
    const std::vector<KmPoint> km = kaplan_meier(data);
    std::vector<PlotPoint> out;
    out.reserve(km.size());
    for (const auto& pt : km)
        out.push_back({pt.time, pt.survival, model_average_survival(kind, data, params, pt.time)});
    return out;
}

}  // namespace frailsurv
