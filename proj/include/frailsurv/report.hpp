#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "frailsurv/bayes.hpp"
#include "frailsurv/diagnostics.hpp"
#include "frailsurv/models.hpp"
#include "frailsurv/modelsel.hpp"

namespace frailsurv {

// Everything a fit emits: chains, per-parameter summaries, the plug-in
// point estimate (posterior means of the first chain), information criteria
// at that estimate, K-S comparison and plot overlay.
struct FitReport {
    ModelKind kind = ModelKind::IgGw;
    std::vector<Chain> chains;
    std::vector<PosteriorSummary> summaries;
    ModelParams estimate;
    double plugin_loglik = 0.0;
    InfoCriteria criteria;
    KsResult ks;
    std::vector<PlotPoint> plot;
};

FitReport build_fit_report(ModelKind kind, std::span<const SurvivalRecord> data,
                           const McmcConfig& cfg, const PriorConfig& priors,
                           std::ostream* progress = nullptr);

}  // namespace frailsurv
