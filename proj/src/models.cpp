#include "frailsurv/models.hpp"

#include <cmath>
#include <stdexcept>

#include "frailsurv/mathutil.hpp"

namespace frailsurv {

std::string to_string(ModelKind kind) { return kind == ModelKind::IgGw ? "ig-gw" : "gl-gw"; }

std::string display_name(ModelKind kind) { return kind == ModelKind::IgGw ? "IG-GW" : "GL-GW"; }

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "ig-gw" || s == "IG-GW" || s == "ig_gw") return ModelKind::IgGw;
    if (s == "gl-gw" || s == "GL-GW" || s == "gl_gw") return ModelKind::GlGw;
    throw std::invalid_argument("unknown model kind: " + s);
}

ModelKind ModelParams::kind() const {
    return std::holds_alternative<IgFrailty>(frailty) ? ModelKind::IgGw : ModelKind::GlGw;
}

void ModelParams::validate(ModelKind expected, std::size_t covariate_dim) const {
    baseline.validate();
    std::visit([](const auto& f) { f.validate(); }, frailty);
    if (kind() != expected)
        throw std::invalid_argument("ModelParams: frailty variant does not match model kind");
    if (beta.size() != covariate_dim)
        throw std::invalid_argument("ModelParams: beta length does not match covariate dimension");
    for (double b : beta)
        if (!std::isfinite(b)) throw std::invalid_argument("ModelParams: beta must be finite");
}

void validate_records(std::span<const SurvivalRecord> data) {
    if (data.empty()) throw std::invalid_argument("dataset must be non-empty");
    const std::size_t dim = data.front().covariates.size();
    for (const auto& r : data) {
        if (!(r.time > 0.0) || !std::isfinite(r.time))
            throw std::invalid_argument("record time must be positive and finite");
        if (r.status != 0 && r.status != 1)
            throw std::invalid_argument("record status must be 0 or 1");
        if (r.covariates.size() != dim)
            throw std::invalid_argument("covariate dimension must be constant across records");
    }
}

double linear_predictor(std::span<const double> covariates, std::span<const double> beta) {
    if (covariates.size() != beta.size())
        throw std::invalid_argument("linear_predictor: covariate/beta length mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) dot += covariates[i] * beta[i];
    return std::exp(dot);
}

namespace {

void check_rho(double rho) {
    if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
}

// log of the GL density factor [eta(1+s eta)^{-1/eta-1} + eps(1+s eps)^{-1/eps-1}]/(eta+eps)
double gl_log_density_factor(double s, const GlFrailty& f) {
    const double a = std::log(f.eta) - (1.0 / f.eta + 1.0) * std::log1p(s * f.eta);
    const double b = std::log(f.epsilon) - (1.0 / f.epsilon + 1.0) * std::log1p(s * f.epsilon);
    return logsumexp2(a, b) - std::log(f.eta + f.epsilon);
}

double log_survival_unchecked(ModelKind, double z, const ModelParams& params, double rho) {
    const double s = gw_cum_hazard(z, params.baseline) * rho;
    return frailty_log_laplace(s, params.frailty);
}

double log_density_unchecked(ModelKind kind, double z, const ModelParams& params, double rho) {
    const double cumhaz = gw_cum_hazard(z, params.baseline);
    const double s = cumhaz * rho;
    const double log_base = std::log(rho) + gw_log_hazard(z, params.baseline);
    if (kind == ModelKind::IgGw) {
        const auto& f = std::get<IgFrailty>(params.frailty);
        return log_base - 0.5 * std::log1p(2.0 * f.eta * s) + ig_log_laplace(s, f);
    }
    const auto& f = std::get<GlFrailty>(params.frailty);
    return log_base + gl_log_density_factor(s, f);
}

}  // namespace

double log_unconditional_survival(ModelKind kind, double z, const ModelParams& params, double rho) {
    params.validate(kind, params.beta.size());
    check_rho(rho);
    return log_survival_unchecked(kind, z, params, rho);
}

double unconditional_survival(ModelKind kind, double z, const ModelParams& params, double rho) {
    return std::exp(log_unconditional_survival(kind, z, params, rho));
}

double log_unconditional_density(ModelKind kind, double z, const ModelParams& params, double rho) {
    params.validate(kind, params.beta.size());
    check_rho(rho);
    if (!(z > 0.0)) throw std::domain_error("unconditional_density: z must be > 0");
    return log_density_unchecked(kind, z, params, rho);
}

double unconditional_density(ModelKind kind, double z, const ModelParams& params, double rho) {
    return std::exp(log_unconditional_density(kind, z, params, rho));
}

double log_likelihood(ModelKind kind, std::span<const SurvivalRecord> data,
                      const ModelParams& params) {
    validate_records(data);
    params.validate(kind, data.front().covariates.size());
    double total = 0.0;
    for (const auto& r : data) {
        const double rho = linear_predictor(r.covariates, params.beta);
        const double term = r.status == 1 ? log_density_unchecked(kind, r.time, params, rho)
                                          : log_survival_unchecked(kind, r.time, params, rho);
        if (term == kNegInf || std::isnan(term)) return kNegInf;
        total += term;
    }
    return std::isfinite(total) ? total : kNegInf;
}

}  // namespace frailsurv
