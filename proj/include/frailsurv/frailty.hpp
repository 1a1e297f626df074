#pragma once

#include <variant>

#include "frailsurv/rng.hpp"

namespace frailsurv {

/// Inverse-Gaussian frailty under the identifiability restriction E[W] = 1.
/// eta is the frailty variance.
struct IgFrailty {
    double eta;

    void validate() const;
};

/// Generalized-Lindley frailty under E[W] = 1: a two-component gamma
/// mixture with components Gamma(1/eta, scale eta) and Gamma(1/eps, scale eps)
/// mixed with proportion p = eta/(eta+eps). Each component has mean 1.
struct GlFrailty {
    double eta;
    double epsilon;

    void validate() const;
    double mixing_proportion() const { return eta / (eta + epsilon); }
};

using FrailtySpec = std::variant<IgFrailty, GlFrailty>;

// --- inverse Gaussian -------------------------------------------------------

/// (2 pi eta)^{-1/2} w^{-3/2} exp(-(w-1)^2 / (2 w eta)) on w > 0.
double ig_density(double w, const IgFrailty& f);

/// Laplace transform exp[(1 - sqrt(1 + 2 eta s)) / eta], s >= 0.
double ig_laplace(double s, const IgFrailty& f);

/// log of ig_laplace, written as -2s / (1 + sqrt(1 + 2 eta s)) so small s
/// does not cancel.
double ig_log_laplace(double s, const IgFrailty& f);

/// One draw from the unit-mean IG law (Michael-Schucany-Haas transform
/// with rejection between the two roots).
double ig_sample(const IgFrailty& f, Rng& rng);

// --- generalized Lindley ----------------------------------------------------

double gl_density(double w, const GlFrailty& f);

/// [eta (1+s eta)^{-1/eta} + eps (1+s eps)^{-1/eps}] / (eta + eps), s >= 0.
double gl_laplace(double s, const GlFrailty& f);

double gl_log_laplace(double s, const GlFrailty& f);

/// Uniform choice between the two gamma components.
double gl_sample(const GlFrailty& f, Rng& rng);

// --- shared -----------------------------------------------------------------

/// Var(W): eta for IG; p eta + (1-p) eps = (eta^2 + eps^2)/(eta + eps) for GL.
double frailty_variance(const FrailtySpec& spec);

double frailty_log_laplace(double s, const FrailtySpec& spec);
double frailty_laplace(double s, const FrailtySpec& spec);
double frailty_density(double w, const FrailtySpec& spec);
double frailty_sample(const FrailtySpec& spec, Rng& rng);

}  // namespace frailsurv
