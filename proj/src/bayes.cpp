#include "frailsurv/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "frailsurv/mathutil.hpp"
#include "frailsurv/rng.hpp"

namespace frailsurv {

void PriorConfig::validate() const {
    auto check_scalar = [](const ScalarPrior& p) {
        std::visit(
            [](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, GammaPrior>) {
                    if (!(v.shape > 0.0) || !(v.rate > 0.0) || !std::isfinite(v.shape) ||
                        !std::isfinite(v.rate))
                        throw std::invalid_argument("gamma prior: shape and rate must be positive");
                } else {
                    if (!(v.lower < v.upper) || !std::isfinite(v.lower) || !std::isfinite(v.upper))
                        throw std::invalid_argument("uniform prior: need finite lower < upper");
                }
            },
            p);
    };
    for (const auto& p : baseline) check_scalar(p);
    check_scalar(ScalarPrior{frailty});
    if (!(beta.variance > 0.0) || !std::isfinite(beta.variance) || !std::isfinite(beta.mean))
        throw std::invalid_argument("beta prior: variance must be positive and finite");
}

double log_scalar_prior(double x, const ScalarPrior& prior) {
    return std::visit(
        [x](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GammaPrior>) {
                return gamma_log_pdf(x, p.shape, p.rate);
            } else {
                if (x < p.lower || x > p.upper) return kNegInf;
                return -std::log(p.upper - p.lower);
            }
        },
        prior);
}

double log_prior(const ModelParams& params, const PriorConfig& cfg) {
    cfg.validate();
    double total = 0.0;
    total += log_scalar_prior(params.baseline.zeta, cfg.baseline[0]);
    total += log_scalar_prior(params.baseline.delta, cfg.baseline[1]);
    total += log_scalar_prior(params.baseline.xi, cfg.baseline[2]);
    const ScalarPrior frailty_prior{cfg.frailty};
    if (const auto* ig = std::get_if<IgFrailty>(&params.frailty)) {
        total += log_scalar_prior(ig->eta, frailty_prior);
    } else {
        const auto& gl = std::get<GlFrailty>(params.frailty);
        total += log_scalar_prior(gl.eta, frailty_prior);
        total += log_scalar_prior(gl.epsilon, frailty_prior);
    }
    for (double b : params.beta) total += normal_log_pdf(b, cfg.beta.mean, cfg.beta.variance);
    return total;
}

double log_posterior(ModelKind kind, std::span<const SurvivalRecord> data,
                     const ModelParams& params, const PriorConfig& cfg) {
    const double lp = log_prior(params, cfg);
    if (lp == kNegInf) return kNegInf;
    const double ll = log_likelihood(kind, data, params);
    if (ll == kNegInf) return kNegInf;
    return ll + lp;
}

void McmcConfig::validate() const {
    if (iterations == 0) throw std::invalid_argument("mcmc: iterations must be positive");
    if (burn_in >= iterations) throw std::invalid_argument("mcmc: burn_in must be < iterations");
    if (thin == 0) throw std::invalid_argument("mcmc: thin must be >= 1");
    if (chains == 0) throw std::invalid_argument("mcmc: chains must be >= 1");
    if (!(target_acceptance > 0.0 && target_acceptance < 1.0))
        throw std::invalid_argument("mcmc: target_acceptance must lie in (0,1)");
    for (double s : step_sizes)
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("mcmc: step sizes must be positive and finite");
}

std::vector<double> Chain::series(std::size_t param_index) const {
    if (param_index >= dim()) throw std::out_of_range("Chain::series: parameter index");
    std::vector<double> out(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) out[i] = draws[i][param_index];
    return out;
}

Chain run_mcmc(const LogTarget& target, std::vector<double> init,
               const std::vector<ProposalScale>& scales, const std::vector<std::string>& names,
               const McmcConfig& cfg, std::uint64_t seed, std::ostream* progress) {
    cfg.validate();
    const std::size_t dim = init.size();
    if (scales.size() != dim || names.size() != dim)
        throw std::invalid_argument("run_mcmc: init/scales/names size mismatch");
    if (!cfg.step_sizes.empty() && cfg.step_sizes.size() != dim)
        throw std::invalid_argument("run_mcmc: step_sizes size mismatch");
    for (std::size_t i = 0; i < dim; ++i)
        if (scales[i] == ProposalScale::Log && !(init[i] > 0.0))
            throw std::invalid_argument("run_mcmc: log-scale parameter must start positive");

    double current_lp = target(init);
    if (!std::isfinite(current_lp))
        throw std::invalid_argument("run_mcmc: initial point has non-finite log target");

    std::vector<double> log_step(dim);
    for (std::size_t i = 0; i < dim; ++i)
        log_step[i] = std::log(cfg.step_sizes.empty() ? 0.1 : cfg.step_sizes[i]);
    constexpr double kMinLogStep = -18.4;  // ~1e-8
    constexpr double kMaxLogStep = 9.2;    // ~1e4

    Rng rng = make_rng(seed);
    std::vector<double> state = std::move(init);
    std::vector<double> proposal = state;
    std::vector<std::uint64_t> accepted(dim, 0);
    std::vector<double> adapt_count(dim, 1.0);

    Chain chain;
    chain.param_names = names;
    chain.seed = seed;
    chain.config = cfg;
    chain.draws.reserve(cfg.retained());
    chain.log_posteriors.reserve(cfg.retained());

    const std::uint64_t post_iters = cfg.iterations - cfg.burn_in;
    for (std::uint64_t iter = 1; iter <= cfg.iterations; ++iter) {
        const bool adapting = cfg.adapt && iter <= cfg.burn_in;
        for (std::size_t i = 0; i < dim; ++i) {
            const double step = std::exp(log_step[i]);
            const double z = draw_normal(rng);
            double jacobian = 0.0;
            proposal[i] = state[i];
            if (scales[i] == ProposalScale::Log) {
                proposal[i] = state[i] * std::exp(step * z);
                jacobian = std::log(proposal[i]) - std::log(state[i]);
            } else {
                proposal[i] = state[i] + step * z;
            }
            double proposed_lp = kNegInf;
            if (std::isfinite(proposal[i])) {
                proposed_lp = target(proposal);
                if (std::isnan(proposed_lp)) proposed_lp = kNegInf;
            }
            const double log_alpha = proposed_lp - current_lp + jacobian;
            const double alpha = log_alpha >= 0.0 ? 1.0 : std::exp(log_alpha);
            const double u = draw_uniform(rng);
            if (u < alpha) {
                state[i] = proposal[i];
                current_lp = proposed_lp;
                if (iter > cfg.burn_in) ++accepted[i];
            } else {
                proposal[i] = state[i];
            }
            if (adapting) {
                log_step[i] += (alpha - cfg.target_acceptance) / adapt_count[i];
                log_step[i] = std::clamp(log_step[i], kMinLogStep, kMaxLogStep);
                adapt_count[i] += 1.0;
            }
        }
        if (iter > cfg.burn_in && (iter - cfg.burn_in) % cfg.thin == 0) {
            chain.draws.push_back(state);
            chain.log_posteriors.push_back(current_lp);
        }
        if (progress && cfg.progress_interval != 0 && iter % cfg.progress_interval == 0) {
            double mean_rate = 0.0;
            if (iter > cfg.burn_in) {
                for (std::size_t i = 0; i < dim; ++i)
                    mean_rate += double(accepted[i]) / double(iter - cfg.burn_in);
                mean_rate /= double(dim);
            }
            (*progress) << "iter " << iter << "/" << cfg.iterations << " logpost " << current_lp
                        << " accept " << mean_rate << "\n";
        }
    }

    chain.acceptance_rates.resize(dim);
    for (std::size_t i = 0; i < dim; ++i)
        chain.acceptance_rates[i] = post_iters == 0 ? 0.0 : double(accepted[i]) / double(post_iters);
    chain.step_sizes.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) chain.step_sizes[i] = std::exp(log_step[i]);
    return chain;
}

ParamLayout ParamLayout::for_model(ModelKind kind, std::size_t covariate_dim) {
    ParamLayout layout;
    layout.names = {"zeta", "delta", "xi", "eta"};
    layout.scales.assign(4, ProposalScale::Log);
    if (kind == ModelKind::GlGw) {
        layout.names.push_back("epsilon");
        layout.scales.push_back(ProposalScale::Log);
    }
    for (std::size_t j = 0; j < covariate_dim; ++j) {
        layout.names.push_back("beta0" + std::to_string(j + 1));
        layout.scales.push_back(ProposalScale::Linear);
    }
    return layout;
}

std::vector<double> pack_params(const ModelParams& p) {
    std::vector<double> v{p.baseline.zeta, p.baseline.delta, p.baseline.xi};
    if (const auto* ig = std::get_if<IgFrailty>(&p.frailty)) {
        v.push_back(ig->eta);
    } else {
        const auto& gl = std::get<GlFrailty>(p.frailty);
        v.push_back(gl.eta);
        v.push_back(gl.epsilon);
    }
    v.insert(v.end(), p.beta.begin(), p.beta.end());
    return v;
}

ModelParams unpack_params(ModelKind kind, std::span<const double> v, std::size_t covariate_dim) {
    const std::size_t frailty_dim = kind == ModelKind::IgGw ? 1 : 2;
    if (v.size() != 3 + frailty_dim + covariate_dim)
        throw std::invalid_argument("unpack_params: vector length mismatch");
    ModelParams p;
    p.baseline = GwParams{v[0], v[1], v[2]};
    if (kind == ModelKind::IgGw)
        p.frailty = IgFrailty{v[3]};
    else
        p.frailty = GlFrailty{v[3], v[4]};
    p.beta.assign(v.begin() + 3 + frailty_dim, v.end());
    return p;
}

ModelParams default_init(ModelKind kind, std::span<const SurvivalRecord> data) {
    validate_records(data);
    double total_time = 0.0;
    std::size_t events = 0;
    for (const auto& r : data) {
        total_time += r.time;
        events += r.status;
    }
    const double rate = events > 0 ? double(events) / total_time : double(data.size()) / total_time;
    ModelParams p;
    p.baseline = GwParams{1.0, rate, 1.0};
    if (kind == ModelKind::IgGw)
        p.frailty = IgFrailty{1.0};
    else
        p.frailty = GlFrailty{1.0, 1.0};
    p.beta.assign(data.front().covariates.size(), 0.0);
    return p;
}

Chain run_chain(ModelKind kind, std::span<const SurvivalRecord> data, const McmcConfig& cfg,
                const PriorConfig& priors, const ModelParams& init, std::ostream* progress) {
    validate_records(data);
    priors.validate();
    const std::size_t covariate_dim = data.front().covariates.size();
    init.validate(kind, covariate_dim);
    const ParamLayout layout = ParamLayout::for_model(kind, covariate_dim);

    LogTarget target = [kind, data, &priors, covariate_dim](std::span<const double> v) -> double {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!std::isfinite(v[i])) return kNegInf;
        const ModelParams p = unpack_params(kind, v, covariate_dim);
        if (!(p.baseline.zeta > 0.0) || !(p.baseline.delta > 0.0) || !(p.baseline.xi > 0.0))
            return kNegInf;
        if (const auto* gl = std::get_if<GlFrailty>(&p.frailty)) {
            if (!(gl->eta > 0.0) || !(gl->epsilon > 0.0)) return kNegInf;
        } else if (!(std::get<IgFrailty>(p.frailty).eta > 0.0)) {
            return kNegInf;
        }
        return log_posterior(kind, data, p, priors);
    };

    return run_mcmc(target, pack_params(init), layout.scales, layout.names, cfg, cfg.seed,
                    progress);
}

std::vector<Chain> run_fit(ModelKind kind, std::span<const SurvivalRecord> data,
                           const McmcConfig& cfg, const PriorConfig& priors,
                           std::ostream* progress) {
    cfg.validate();
    const ModelParams base_init = default_init(kind, data);
    const std::size_t frailty_dim = kind == ModelKind::IgGw ? 1 : 2;

    std::vector<Chain> chains;
    chains.reserve(cfg.chains);
    std::uint64_t seed_state = cfg.seed;
    for (unsigned c = 0; c < cfg.chains; ++c) {
        const std::uint64_t chain_seed = c == 0 ? cfg.seed : splitmix64(seed_state);
        std::vector<double> v = pack_params(base_init);
        if (c > 0) {
            Rng jitter = make_substream(cfg.seed, 1000 + c);
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i < 3 + frailty_dim)
                    v[i] *= 0.5 + draw_uniform(jitter);  // multiplicative +-50%
                else
                    v[i] += draw_uniform(jitter) - 0.5;
            }
        }
        McmcConfig chain_cfg = cfg;
        chain_cfg.seed = chain_seed;
        chains.push_back(run_chain(kind, data, chain_cfg, priors,
                                   unpack_params(kind, v, base_init.beta.size()), progress));
    }
    return chains;
}

}  // namespace frailsurv
