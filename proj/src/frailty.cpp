#include "frailsurv/frailty.hpp"

#include <cmath>
#include <stdexcept>

#include "frailsurv/mathutil.hpp"

namespace frailsurv {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // log(2 pi)/2

void check_transform_arg(double s) {
    if (!(s >= 0.0)) throw std::domain_error("laplace: argument must be >= 0");
}

void check_frailty_value(double w) {
    if (!(w > 0.0)) throw std::domain_error("frailty density: w must be > 0");
}

double gamma_pdf(double w, double shape, double scale) {
    return std::exp((shape - 1.0) * std::log(w) - w / scale - std::lgamma(shape) -
                    shape * std::log(scale));
}

}  // namespace

void IgFrailty::validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::invalid_argument("IgFrailty: eta must be positive and finite");
}

void GlFrailty::validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta) || !(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("GlFrailty: eta and epsilon must be positive and finite");
}

double ig_density(double w, const IgFrailty& f) {
    f.validate();
    check_frailty_value(w);
    const double d = w - 1.0;
    return std::exp(-0.5 * std::log(f.eta) - kHalfLog2Pi - 1.5 * std::log(w) -
                    d * d / (2.0 * w * f.eta));
}

double ig_log_laplace(double s, const IgFrailty& f) {
    f.validate();
    check_transform_arg(s);
    if (s == kPosInf) return kNegInf;  // L(inf) = 0, avoid inf/inf
    // (1 - sqrt(1+2 eta s))/eta rewritten to avoid cancellation at small s
    return -2.0 * s / (1.0 + std::sqrt(1.0 + 2.0 * f.eta * s));
}

double ig_laplace(double s, const IgFrailty& f) { return std::exp(ig_log_laplace(s, f)); }

double ig_sample(const IgFrailty& f, Rng& rng) {
    f.validate();
    // unit mean, shape lambda = 1/eta so that Var = mu^3/lambda = eta
    const double lambda = 1.0 / f.eta;
    const double nu = draw_normal(rng);
    const double y = nu * nu;
    const double x1 =
        1.0 + y / (2.0 * lambda) - std::sqrt(4.0 * lambda * y + y * y) / (2.0 * lambda);
    const double u = draw_uniform(rng);
    return u <= 1.0 / (1.0 + x1) ? x1 : 1.0 / x1;
}

double gl_density(double w, const GlFrailty& f) {
    f.validate();
    check_frailty_value(w);
    const double p = f.mixing_proportion();
    return p * gamma_pdf(w, 1.0 / f.eta, f.eta) + (1.0 - p) * gamma_pdf(w, 1.0 / f.epsilon, f.epsilon);
}

double gl_log_laplace(double s, const GlFrailty& f) {
    f.validate();
    check_transform_arg(s);
    const double a = std::log(f.eta) - std::log1p(s * f.eta) / f.eta;
    const double b = std::log(f.epsilon) - std::log1p(s * f.epsilon) / f.epsilon;
    return logsumexp2(a, b) - std::log(f.eta + f.epsilon);
}

double gl_laplace(double s, const GlFrailty& f) { return std::exp(gl_log_laplace(s, f)); }

double gl_sample(const GlFrailty& f, Rng& rng) {
    f.validate();
    const double u = draw_uniform(rng);
    if (u < f.mixing_proportion()) return draw_gamma(rng, 1.0 / f.eta, f.eta);
    return draw_gamma(rng, 1.0 / f.epsilon, f.epsilon);
}

double frailty_variance(const FrailtySpec& spec) {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            f.validate();
            if constexpr (std::is_same_v<T, IgFrailty>) {
                return f.eta;
            } else {
                // mixture second moment minus 1: p eta + (1-p) eps
                return (f.eta * f.eta + f.epsilon * f.epsilon) / (f.eta + f.epsilon);
            }
        },
        spec);
}

double frailty_log_laplace(double s, const FrailtySpec& spec) {
    return std::visit(
        [s](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, IgFrailty>)
                return ig_log_laplace(s, f);
            else
                return gl_log_laplace(s, f);
        },
        spec);
}

double frailty_laplace(double s, const FrailtySpec& spec) {
    return std::exp(frailty_log_laplace(s, spec));
}

double frailty_density(double w, const FrailtySpec& spec) {
    return std::visit(
        [w](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, IgFrailty>)
                return ig_density(w, f);
            else
                return gl_density(w, f);
        },
        spec);
}

double frailty_sample(const FrailtySpec& spec, Rng& rng) {
    return std::visit(
        [&rng](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, IgFrailty>)
                return ig_sample(f, rng);
            else
                return gl_sample(f, rng);
        },
        spec);
}

}  // namespace frailsurv
