#include "frailsurv/baseline.hpp"

#include <cmath>
#include <stdexcept>

#include "frailsurv/mathutil.hpp"

namespace frailsurv {

namespace {

void check_time(double z) {
    if (!(z >= 0.0) || !std::isfinite(z))
        throw std::domain_error("gw: time must be finite and non-negative");
}

// log(1 - e^{-delta z^xi}), i.e. log of the inner Weibull CDF. Stays
// accurate in both tails; -inf at z = 0, 0 once e^{-delta z^xi} underflows.
double log_inner_cdf(double z, const GwParams& p) {
    const double t = p.delta * std::pow(z, p.xi);
    return log1mexp(-t);
}

}  // namespace

void GwParams::validate() const {
    if (!(zeta > 0.0) || !std::isfinite(zeta) || !(delta > 0.0) || !std::isfinite(delta) ||
        !(xi > 0.0) || !std::isfinite(xi))
        throw std::invalid_argument("GwParams: zeta, delta, xi must be positive and finite");
}

double gw_survival(double z, const GwParams& p) {
    p.validate();
    check_time(z);
    if (z == 0.0) return 1.0;
    const double x = p.zeta * log_inner_cdf(z, p);  // log (1-e^{-dz^xi})^zeta, <= 0
    if (x == 0.0) return 0.0;                       // survival underflowed
    return -std::expm1(x);
}

double gw_log_survival(double z, const GwParams& p) {
    p.validate();
    check_time(z);
    if (z == 0.0) return 0.0;
    const double t = p.delta * std::pow(z, p.xi);
    const double x = t == kPosInf ? 0.0 : p.zeta * log1mexp(-t);
    // e^{-t} underflowed: S ~ zeta e^{-t}, so keep the tail on its asymptote
    // instead of collapsing to -inf while t is still representable.
    if (x == 0.0) return std::log(p.zeta) - t;
    return log1mexp(x);
}

double gw_cum_hazard(double z, const GwParams& p) { return -gw_log_survival(z, p); }

double gw_log_hazard(double z, const GwParams& p) {
    p.validate();
    check_time(z);
    if (z == 0.0) {
        const double power = p.xi * p.zeta;  // hazard ~ xi zeta delta^zeta z^{xi zeta - 1} near 0
        if (power < 1.0) return kPosInf;
        if (power == 1.0) return p.zeta * std::log(p.delta);
        return kNegInf;
    }
    const double t = p.delta * std::pow(z, p.xi);
    const double log_u = t == kPosInf ? 0.0 : log1mexp(-t);
    const double x = p.zeta * log_u;
    // once e^{-t} underflows the hazard sits on its Weibull asymptote xi delta z^{xi-1}
    if (x == 0.0) return std::log(p.xi * p.delta) + (p.xi - 1.0) * std::log(z);
    // log hazard = log(xi zeta delta) + (xi-1)log z - t + (zeta-1)log u + Phi(z);
    // the -t and +Phi terms cancel analytically deep in the tail, keeping this finite.
    const double cumhaz = -log1mexp(x);
    const double shape_term = p.zeta == 1.0 ? 0.0 : (p.zeta - 1.0) * log_u;
    return std::log(p.xi * p.zeta * p.delta) + (p.xi - 1.0) * std::log(z) - t + shape_term + cumhaz;
}

double gw_hazard(double z, const GwParams& p) { return std::exp(gw_log_hazard(z, p)); }

double gw_quantile_from_cumhazard(double target, const GwParams& p) {
    p.validate();
    if (!(target >= 0.0)) throw std::domain_error("gw_quantile_from_cumhazard: target must be >= 0");
    if (target == 0.0) return 0.0;
    if (target == kPosInf) return kPosInf;
    // q = 1 - e^{-target}; r = q^{1/zeta}; delta z^xi = -log(1 - r)
    const double log_q = log1mexp(-target);
    // e^{-target} underflowed: invert the deep-tail asymptote
    // Phi0(z) = delta z^xi - log zeta instead of collapsing to +inf
    // (the regime gw_log_survival handles on the forward side).
    const double inner =
        log_q == 0.0 ? target + std::log(p.zeta) : -log1mexp(log_q / p.zeta);
    return std::pow(inner / p.delta, 1.0 / p.xi);
}

}  // namespace frailsurv
