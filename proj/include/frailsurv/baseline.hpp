#pragma once

namespace frailsurv {

/// Generalized (exponentiated) Weibull baseline parameters.
/// Survival S(z) = 1 - (1 - e^{-delta z^xi})^zeta on z >= 0.
struct GwParams {
    double zeta;   // outer shape, > 0
    double delta;  // scale-rate, > 0
    double xi;     // power, > 0

    void validate() const;
};

/// S(z) = 1 - (1 - e^{-delta z^xi})^zeta. 1 at z = 0, decreasing to 0.
double gw_survival(double z, const GwParams& p);

/// Cumulative hazard -log S(z). 0 at z = 0; follows the asymptote
/// delta z^xi - log zeta after the survival underflows, so it stays finite
/// until delta z^xi itself overflows. Never NaN for valid input.
double gw_cum_hazard(double z, const GwParams& p);

/// log S(z), computed without forming S when it is tiny.
double gw_log_survival(double z, const GwParams& p);

/// Hazard dPhi/dz. At z = 0 the boundary limit is returned
/// (+inf when xi*zeta < 1, delta^zeta when xi*zeta = 1, 0 otherwise).
double gw_hazard(double z, const GwParams& p);

/// log of gw_hazard; -inf where the hazard is 0.
double gw_log_hazard(double z, const GwParams& p);

/// Inverse of gw_cum_hazard: the z with Phi(z) = target.
/// Closed form z = (-(1/delta) log(1 - (1 - e^{-target})^{1/zeta}))^{1/xi};
/// inverts the asymptote delta z^xi = target + log zeta once e^{-target}
/// underflows, so it stays finite for any finite target.
double gw_quantile_from_cumhazard(double target, const GwParams& p);

}  // namespace frailsurv
