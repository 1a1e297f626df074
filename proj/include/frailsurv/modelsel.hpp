#pragma once

#include <optional>
#include <span>
#include <vector>

#include "frailsurv/models.hpp"

namespace frailsurv {

// Information criteria for a fitted model with k parameters on n records.
struct InfoCriteria {
    double aic = 0.0;
    double bic = 0.0;
    std::optional<double> aicc;  // absent when n <= k + 1
    double hqic = 0.0;
};

InfoCriteria info_criteria(double log_likelihood, std::size_t k, std::size_t n);

// Kaplan-Meier product-limit estimate, one point per distinct event time.
struct KmPoint {
    double time = 0.0;
    std::size_t at_risk = 0;
    std::size_t events = 0;
    double survival = 1.0;
};

std::vector<KmPoint> kaplan_meier(std::span<const SurvivalRecord> data);

// Population-averaged survival under the model: mean over subjects of the
// unconditional survival at time t with each subject's own covariates.
double model_average_survival(ModelKind kind, std::span<const SurvivalRecord> data,
                              const ModelParams& params, double t);

// Kolmogorov-Smirnov comparison between the Kaplan-Meier curve and the
// population-averaged model curve, evaluated at the event times.
struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

KsResult ks_gof(ModelKind kind, std::span<const SurvivalRecord> data, const ModelParams& params);

// P(D_n > lambda / sqrt(n)) under the asymptotic Kolmogorov distribution.
double kolmogorov_p(double lambda);

// Overlay table for survival plots: one row per distinct event time.
struct PlotPoint {
    double time = 0.0;
    double km_survival = 1.0;
    double model_survival = 1.0;
};

std::vector<PlotPoint> plot_data(ModelKind kind, std::span<const SurvivalRecord> data,
                                 const ModelParams& params);

}  // namespace frailsurv
