#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "frailsurv/baseline.hpp"
#include "frailsurv/frailty.hpp"

namespace frailsurv {

enum class ModelKind : std::uint8_t { IgGw, GlGw };

std::string to_string(ModelKind kind);
std::string display_name(ModelKind kind);  // "IG-GW" / "GL-GW"
ModelKind model_kind_from_string(const std::string& s);

/// Full parameter vector for one model: baseline (zeta, delta, xi),
/// frailty (eta or eta+epsilon) and regression coefficients.
struct ModelParams {
    GwParams baseline;
    FrailtySpec frailty;
    std::vector<double> beta;

    ModelKind kind() const;
    void validate(ModelKind expected, std::size_t covariate_dim) const;
};

/// One subject: observed time, censoring indicator (1 = event observed,
/// 0 = right-censored) and covariate vector.
struct SurvivalRecord {
    double time = 0.0;
    int status = 0;
    std::vector<double> covariates;
};

void validate_records(std::span<const SurvivalRecord> data);

/// rho = exp(K' beta).
double linear_predictor(std::span<const double> covariates, std::span<const double> beta);

/// Lambda(z) = L_W(Phi0(z) rho). 1 at z = 0, non-increasing in z.
double unconditional_survival(ModelKind kind, double z, const ModelParams& params, double rho);

double log_unconditional_survival(ModelKind kind, double z, const ModelParams& params, double rho);

/// f(z) = -dLambda/dz, in closed form:
///   IG-GW: rho phi0(z) (1 + 2 eta Phi0 rho)^{-1/2} Lambda(z)
///   GL-GW: rho phi0(z) [eta(1+Phi0 rho eta)^{-1/eta-1} + eps(1+Phi0 rho eps)^{-1/eps-1}]/(eta+eps)
double unconditional_density(ModelKind kind, double z, const ModelParams& params, double rho);

double log_unconditional_density(ModelKind kind, double z, const ModelParams& params, double rho);

/// Sum of log f(z_j) over events plus log Lambda(z_j) over censored records.
/// Returns -inf when any term underflows; callers treat that as a rejected
/// point, not an error. Fixed summation order for bit reproducibility.
double log_likelihood(ModelKind kind, std::span<const SurvivalRecord> data,
                      const ModelParams& params);

}  // namespace frailsurv
