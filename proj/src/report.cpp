#include "frailsurv/report.hpp"

namespace frailsurv {

FitReport build_fit_report(ModelKind kind, std::span<const SurvivalRecord> data,
                           const McmcConfig& cfg, const PriorConfig& priors,
                           std::ostream* progress) {
    validate_records(data);
    FitReport rep;
    rep.kind = kind;
    rep.chains = run_fit(kind, data, cfg, priors, progress);
    rep.summaries = summarize_fit(rep.chains);

    std::vector<double> means;
    means.reserve(rep.summaries.size());
    for (const auto& row : rep.summaries) means.push_back(row.estimate);
    const std::size_t covariate_dim = data.front().covariates.size();
    rep.estimate = unpack_params(kind, means, covariate_dim);

    rep.plugin_loglik = log_likelihood(kind, data, rep.estimate);
    rep.criteria = info_criteria(rep.plugin_loglik, means.size(), data.size());
    rep.ks = ks_gof(kind, data, rep.estimate);
    rep.plot = plot_data(kind, data, rep.estimate);
    return rep;
}

}  // namespace frailsurv
