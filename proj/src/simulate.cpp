#include "frailsurv/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "frailsurv/baseline.hpp"
#include "frailsurv/frailty.hpp"
#include "frailsurv/mathutil.hpp"
#include "frailsurv/rng.hpp"

namespace frailsurv {

void SimConfig::validate() const {
    if (n == 0) throw std::invalid_argument("simulate: n must be positive");
    params.validate(kind, params.beta.size());
    if (!(bernoulli_prob > 0.0 && bernoulli_prob < 1.0))
        throw std::invalid_argument("simulate: bernoulli_prob must lie in (0,1)");
    if (!(censoring_rate > 0.0) || !std::isfinite(censoring_rate))
        throw std::invalid_argument("simulate: censoring_rate must be positive and finite");
}

double invert_lifetime(double v, double w, double rho, const GwParams& baseline) {
    if (!(rho > 0.0) || !(w > 0.0)) throw std::invalid_argument("invert_lifetime: rho, w > 0");
    if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("invert_lifetime: v must lie in (0,1)");
    return gw_quantile_from_cumhazard(-std::log(v) / (w * rho), baseline);
}

std::vector<SurvivalRecord> simulate_dataset(const SimConfig& cfg) {
    cfg.validate();
    Rng frailty_rng = make_substream(cfg.seed, 0);
    Rng covariate_rng = make_substream(cfg.seed, 1);
    Rng uniform_rng = make_substream(cfg.seed, 2);
    Rng censor_rng = make_substream(cfg.seed, 3);

    const std::size_t m = cfg.params.beta.size();
    std::vector<SurvivalRecord> out;
    out.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        SurvivalRecord rec;
        rec.covariates.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            if (cfg.covariates == CovariateKind::Bernoulli)
                rec.covariates[j] = draw_uniform(covariate_rng) < cfg.bernoulli_prob ? 1.0 : 0.0;
            else
                rec.covariates[j] = draw_normal(covariate_rng);
        }
        const double rho = linear_predictor(rec.covariates, cfg.params.beta);
        const double w = frailty_sample(cfg.params.frailty, frailty_rng);

        double lifetime = kPosInf;
        // a uniform draw hitting exactly 0 (or an extreme tail pushing the
        // quantile to +inf) is redrawn rather than emitted
        for (int attempt = 0; attempt < 64; ++attempt) {
            const double v = draw_uniform(uniform_rng);
            if (!(v > 0.0 && v < 1.0)) continue;
            lifetime = invert_lifetime(v, w, rho, cfg.params.baseline);
            if (std::isfinite(lifetime) && lifetime > 0.0) break;
        }
        if (!std::isfinite(lifetime) || !(lifetime > 0.0))
            throw std::runtime_error("simulate: failed to draw a finite positive lifetime");

        const double censor = draw_exponential(censor_rng, cfg.censoring_rate);
        rec.status = lifetime < censor ? 1 : 0;
        rec.time = rec.status == 1 ? lifetime : censor;
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace frailsurv
