#pragma once

#include <cstdint>
#include <vector>

#include "frailsurv/models.hpp"

namespace frailsurv {

enum class CovariateKind { Bernoulli, Normal };

// Synthetic right-censored data from a chosen model. One covariate column is
// drawn per beta coefficient; lifetimes come from inverting the conditional
// survival given the subject's frailty; censoring times are exponential.
struct SimConfig {
    ModelKind kind = ModelKind::IgGw;
    std::size_t n = 100;
    ModelParams params;  // true values, beta length sets the covariate count
    CovariateKind covariates = CovariateKind::Bernoulli;
    double bernoulli_prob = 0.6;
    double censoring_rate = 0.1;  // exponential rate, > 0
    std::uint64_t seed = 0;

    void validate() const;
};

// Lifetime with conditional survival v given frailty w and relative risk rho:
// solves e^{-w rho Phi0(z)} = v for z.
double invert_lifetime(double v, double w, double rho, const GwParams& baseline);

// Draws n records. Each random ingredient (frailties, covariates, survival
// uniforms, censoring times) uses its own substream of `seed`, so record i is
// the same no matter how large n is.
std::vector<SurvivalRecord> simulate_dataset(const SimConfig& cfg);

}  // namespace frailsurv
