#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "frailsurv/models.hpp"

namespace frailsurv {

struct GammaPrior {
    double shape = 1e-4;
    double rate = 1e-4;
};

struct UniformPrior {
    double lower = 0.0;
    double upper = 100.0;
};

struct NormalPrior {
    double mean = 0.0;
    double variance = 1000.0;
};

using ScalarPrior = std::variant<GammaPrior, UniformPrior>;

/// Independent priors: vague gamma on every positive parameter by default,
/// flat-uniform selectable per baseline parameter, zero-mean high-variance
/// normal on the regression coefficients.
struct PriorConfig {
    std::array<ScalarPrior, 3> baseline{GammaPrior{}, GammaPrior{}, GammaPrior{}};  // zeta, delta, xi
    GammaPrior frailty{};  // applied to eta (and epsilon for GL)
    NormalPrior beta{};

    void validate() const;
};

double log_scalar_prior(double x, const ScalarPrior& prior);
double log_prior(const ModelParams& params, const PriorConfig& cfg);
double log_posterior(ModelKind kind, std::span<const SurvivalRecord> data,
                     const ModelParams& params, const PriorConfig& cfg);

struct McmcConfig {
    std::uint64_t iterations = 100000;
    std::uint64_t burn_in = 6900;
    std::uint64_t thin = 400;
    unsigned chains = 2;
    std::vector<double> step_sizes;  // per parameter; empty = 0.1 for all
    bool adapt = true;
    double target_acceptance = 0.30;
    std::uint64_t seed = 0;
    std::uint64_t progress_interval = 0;  // sweeps between progress lines; 0 = silent

    void validate() const;
    std::uint64_t retained() const { return (iterations - burn_in) / thin; }
};

/// How a coordinate is proposed: log-scale random walk with log-normal
/// Jacobian for positive parameters, plain random walk otherwise.
enum class ProposalScale : std::uint8_t { Log, Linear };

struct Chain {
    std::vector<std::string> param_names;
    std::vector<std::vector<double>> draws;  // natural scale, one row per retained draw
    std::vector<double> log_posteriors;
    std::vector<double> acceptance_rates;  // per parameter, post burn-in
    std::vector<double> step_sizes;        // frozen values used after burn-in
    std::uint64_t seed = 0;
    McmcConfig config;

    std::size_t size() const { return draws.size(); }
    std::size_t dim() const { return param_names.size(); }
    /// Column view of one parameter across retained draws.
    std::vector<double> series(std::size_t param_index) const;
};

using LogTarget = std::function<double(std::span<const double>)>;

/// Single-site random-walk Metropolis within a fixed-order Gibbs sweep over
/// an arbitrary log target. Robbins-Monro step adaptation runs during
/// burn-in only and is frozen afterwards. Deterministic given seed.
Chain run_mcmc(const LogTarget& target, std::vector<double> init,
               const std::vector<ProposalScale>& scales, const std::vector<std::string>& names,
               const McmcConfig& cfg, std::uint64_t seed, std::ostream* progress = nullptr);

/// Sampled-vector layout for a model: zeta, delta, xi, eta[, epsilon], beta...
struct ParamLayout {
    std::vector<std::string> names;
    std::vector<ProposalScale> scales;

    static ParamLayout for_model(ModelKind kind, std::size_t covariate_dim);
    std::size_t dim() const { return names.size(); }
};

std::vector<double> pack_params(const ModelParams& p);
ModelParams unpack_params(ModelKind kind, std::span<const double> v, std::size_t covariate_dim);

/// Crude data-driven starting point: unit shapes, event-rate delta,
/// unit frailty parameters, zero coefficients.
ModelParams default_init(ModelKind kind, std::span<const SurvivalRecord> data);

Chain run_chain(ModelKind kind, std::span<const SurvivalRecord> data, const McmcConfig& cfg,
                const PriorConfig& priors, const ModelParams& init,
                std::ostream* progress = nullptr);

/// cfg.chains chains from over-dispersed starts: chain 0 from `default_init`,
/// later chains jittered (positive parameters by uniform[0.5, 1.5]
/// multiplicatively, coefficients by uniform[-0.5, 0.5]), distinct derived seeds.
std::vector<Chain> run_fit(ModelKind kind, std::span<const SurvivalRecord> data,
                           const McmcConfig& cfg, const PriorConfig& priors,
                           std::ostream* progress = nullptr);

}  // namespace frailsurv
