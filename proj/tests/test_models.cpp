#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "frailsurv/mathutil.hpp"
#include "frailsurv/models.hpp"
#include "frailsurv/simulate.hpp"
#include "support/oracles.hpp"

using namespace frailsurv;

namespace {

ModelParams ig_params(double zeta, double delta, double xi, double eta,
                      std::vector<double> beta = {}) {
    return ModelParams{GwParams{zeta, delta, xi}, IgFrailty{eta}, std::move(beta)};
}

ModelParams gl_params(double zeta, double delta, double xi, double eta, double eps,
                      std::vector<double> beta = {}) {
    return ModelParams{GwParams{zeta, delta, xi}, GlFrailty{eta, eps}, std::move(beta)};
}

// Five parameter sets per model exercised by the derivative/marginal checks.
const std::vector<ModelParams> kIgSets = {
    ig_params(1.0, 1.0, 1.0, 0.5),  ig_params(2.0, 0.5, 1.0, 1.0),
    ig_params(0.7, 1.3, 0.8, 0.25), ig_params(3.0, 0.3, 1.8, 2.0),
    ig_params(1.5, 0.9, 1.2, 1.13022),
};
const std::vector<ModelParams> kGlSets = {
    gl_params(1.0, 1.0, 1.0, 1.0, 1.0),  gl_params(2.0, 0.5, 1.0, 2.0, 0.5),
    gl_params(0.7, 1.3, 0.8, 0.4, 1.2),  gl_params(3.0, 0.3, 1.8, 0.9, 0.9),
    gl_params(1.5, 0.9, 1.2, 1.6, 0.3),
};

}  // namespace

TEST_CASE("model kind names round-trip") {
    CHECK(to_string(ModelKind::IgGw) == "ig-gw");
    CHECK(to_string(ModelKind::GlGw) == "gl-gw");
    CHECK(display_name(ModelKind::IgGw) == "IG-GW");
    CHECK(display_name(ModelKind::GlGw) == "GL-GW");
    CHECK(model_kind_from_string("ig-gw") == ModelKind::IgGw);
    CHECK(model_kind_from_string("GL-GW") == ModelKind::GlGw);
    CHECK_THROWS_AS(model_kind_from_string("weibull"), std::invalid_argument);
}

TEST_CASE("linear_predictor") {
    CHECK(linear_predictor(std::vector<double>{}, std::vector<double>{}) == 1.0);
    const std::vector<double> k1{1.0};
    const std::vector<double> b1{2.74224};
    CHECK(linear_predictor(k1, b1) == doctest::Approx(15.521714825730998).epsilon(1e-14));
    // (1, 2) . (0.5, -0.25) = 0 so rho = 1.
    const std::vector<double> k2{1.0, 2.0};
    const std::vector<double> b2{0.5, -0.25};
    CHECK(linear_predictor(k2, b2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(linear_predictor(k2, b1), std::invalid_argument);
}

TEST_CASE("unconditional survival: frozen IG value and boundaries") {
    const auto p = ig_params(1.0, 1.0, 1.0, 0.5);
    CHECK(unconditional_survival(ModelKind::IgGw, 2.0, p, 1.0) ==
          doctest::Approx(0.23128568172579032).epsilon(1e-14));
    CHECK(unconditional_survival(ModelKind::IgGw, 0.0, p, 1.0) == 1.0);
    CHECK(unconditional_survival(ModelKind::IgGw, 0.0, p, 3.7) == 1.0);
}

TEST_CASE("unconditional survival is non-increasing and respects rho ordering") {
    for (const auto& p : kIgSets) {
        double prev = 1.0;
        for (int i = 1; i <= 50; ++i) {
            const double z = 0.2 * i;
            const double s = unconditional_survival(ModelKind::IgGw, z, p, 1.3);
            CHECK(s <= prev);
            prev = s;
            // Larger relative risk, smaller survival.
            CHECK(unconditional_survival(ModelKind::IgGw, z, p, 2.6) <= s);
        }
    }
    for (const auto& p : kGlSets) {
        double prev = 1.0;
        for (int i = 1; i <= 50; ++i) {
            const double z = 0.2 * i;
            const double s = unconditional_survival(ModelKind::GlGw, z, p, 1.3);
            CHECK(s <= prev);
            prev = s;
        }
    }
}

TEST_CASE("GL-GW density Lomax reduction") {
    // eta = eps = 1, unit baseline, rho = 1: f(z) = (1+z)^{-2} e^{... } with
    // Phi0 = z, so f(1) = 1/4 exactly.
    const auto p = gl_params(1.0, 1.0, 1.0, 1.0, 1.0);
    CHECK(unconditional_density(ModelKind::GlGw, 1.0, p, 1.0) ==
          doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("closed-form density equals -dS/dz by finite differences") {
    // 50-point grid per parameter set, both models, 1e-5 relative agreement.
    auto run = [](ModelKind kind, const ModelParams& p) {
        const double rho = 1.4;
        for (int i = 1; i <= 50; ++i) {
            const double z = 0.12 * i;
            const double h = 1e-6 * std::max(z, 1.0);
            const double fd = -oracle::central_diff(
                [&](double x) { return unconditional_survival(kind, x, p, rho); }, z, h);
            const double cf = unconditional_density(kind, z, p, rho);
            if (cf > 1e-12)  // below that FD noise dominates
                CHECK(cf == doctest::Approx(fd).epsilon(1e-5));
        }
    };
    for (const auto& p : kIgSets) run(ModelKind::IgGw, p);
    for (const auto& p : kGlSets) run(ModelKind::GlGw, p);
}

#ifdef HAVE_BOOST_QUADRATURE
TEST_CASE("survival equals the frailty-marginalized conditional survival") {
    // S(z) = int_0^inf e^{-w Phi0 rho} f_W(w) dw, by quadrature.
    auto run = [](ModelKind kind, const ModelParams& p) {
        const double rho = 0.9;
        for (double z : {0.4, 1.1, 2.8}) {
            const double s0 = gw_cum_hazard(z, p.baseline) * rho;
            const double byq = oracle::integrate_positive_axis(
                [&](double w) { return std::exp(-w * s0) * frailty_density(w, p.frailty); });
            CHECK(unconditional_survival(kind, z, p, rho) == doctest::Approx(byq).epsilon(1e-6));
        }
    };
    for (const auto& p : kIgSets) run(ModelKind::IgGw, p);
    for (const auto& p : kGlSets) run(ModelKind::GlGw, p);
}

TEST_CASE("unconditional density integrates to one") {
    const auto pig = ig_params(2.0, 0.5, 1.0, 1.0);
    const double mig = oracle::integrate_positive_axis(
        [&](double z) { return unconditional_density(ModelKind::IgGw, z, pig, 1.0); });
    CHECK(mig == doctest::Approx(1.0).epsilon(1e-4));
    // The eta = 2 component gives this density a z^{-3/2} power tail, so the
    // integral needs the heavy-tail transform to converge.
    const auto pgl = gl_params(2.0, 0.5, 1.0, 2.0, 0.5);
    const double mgl = oracle::integrate_positive_axis_heavy(
        [&](double z) { return unconditional_density(ModelKind::GlGw, z, pgl, 1.0); });
    CHECK(mgl == doctest::Approx(1.0).epsilon(1e-4));
}
#endif  // HAVE_BOOST_QUADRATURE

namespace {

// Straight-line likelihood reimplementation: no log-space tricks, direct
// textbook formulas. Valid only away from under/overflow.
double naive_loglik(ModelKind kind, std::span<const SurvivalRecord> data, const ModelParams& p) {
    double total = 0.0;
    for (const auto& r : data) {
        double dot = 0.0;
        for (std::size_t j = 0; j < r.covariates.size(); ++j) dot += r.covariates[j] * p.beta[j];
        const double rho = std::exp(dot);
        const double inner = 1.0 - std::exp(-p.baseline.delta * std::pow(r.time, p.baseline.xi));
        const double surv = 1.0 - std::pow(inner, p.baseline.zeta);
        const double phi0 = -std::log(surv);
        const double s = phi0 * rho;
        double laplace, density_factor;
        if (kind == ModelKind::IgGw) {
            const auto& f = std::get<IgFrailty>(p.frailty);
            laplace = std::exp((1.0 - std::sqrt(1.0 + 2.0 * f.eta * s)) / f.eta);
            density_factor = std::pow(1.0 + 2.0 * f.eta * s, -0.5) * laplace;
        } else {
            const auto& f = std::get<GlFrailty>(p.frailty);
            laplace = (f.eta * std::pow(1.0 + s * f.eta, -1.0 / f.eta) +
                       f.epsilon * std::pow(1.0 + s * f.epsilon, -1.0 / f.epsilon)) /
                      (f.eta + f.epsilon);
            density_factor = (f.eta * std::pow(1.0 + s * f.eta, -1.0 / f.eta - 1.0) +
                              f.epsilon * std::pow(1.0 + s * f.epsilon, -1.0 / f.epsilon - 1.0)) /
                             (f.eta + f.epsilon);
        }
        if (r.status == 1) {
            const double hazard = p.baseline.zeta * p.baseline.delta * p.baseline.xi *
                                  std::pow(r.time, p.baseline.xi - 1.0) *
                                  std::exp(-p.baseline.delta * std::pow(r.time, p.baseline.xi)) *
                                  std::pow(inner, p.baseline.zeta - 1.0) / surv;
            total += std::log(rho * hazard * density_factor);
        } else {
            total += std::log(laplace);
        }
    }
    return total;
}

std::vector<SurvivalRecord> moderate_dataset(ModelKind kind) {
    SimConfig cfg;
    cfg.kind = kind;
    cfg.n = 25;
    cfg.params = kind == ModelKind::IgGw ? ig_params(1.2, 0.8, 1.1, 0.6, {0.4, -0.3})
                                         : gl_params(1.2, 0.8, 1.1, 0.9, 0.7, {0.4, -0.3});
    cfg.covariates = CovariateKind::Bernoulli;
    cfg.censoring_rate = 0.3;
    cfg.seed = 99;
    return simulate_dataset(cfg);
}

}  // namespace

TEST_CASE("log_likelihood matches a naive reimplementation") {
    for (ModelKind kind : {ModelKind::IgGw, ModelKind::GlGw}) {
        const auto data = moderate_dataset(kind);
        const auto p = kind == ModelKind::IgGw ? ig_params(1.3, 0.7, 1.0, 0.8, {0.2, 0.1})
                                               : gl_params(1.3, 0.7, 1.0, 1.1, 0.6, {0.2, 0.1});
        const double fast = log_likelihood(kind, data, p);
        const double slow = naive_loglik(kind, data, p);
        CHECK(std::isfinite(fast));
        CHECK(fast == doctest::Approx(slow).epsilon(1e-10));
    }
}

TEST_CASE("log_likelihood is permutation invariant") {
    const auto data = moderate_dataset(ModelKind::IgGw);
    const auto p = ig_params(1.1, 0.9, 1.05, 0.5, {0.3, -0.2});
    const double base = log_likelihood(ModelKind::IgGw, data, p);
    auto shuffled = data;
    std::mt19937 g(7);
    std::shuffle(shuffled.begin(), shuffled.end(), g);
    CHECK(log_likelihood(ModelKind::IgGw, shuffled, p) == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("log_likelihood handles all-censored and single-event data") {
    const auto p = ig_params(1.0, 1.0, 1.0, 0.5, {});
    std::vector<SurvivalRecord> all_censored{{1.0, 0, {}}, {2.0, 0, {}}};
    // All censored: sum of log Laplace at Phi0.
    const double expect = frailty_log_laplace(1.0, p.frailty) + frailty_log_laplace(2.0, p.frailty);
    CHECK(log_likelihood(ModelKind::IgGw, all_censored, p) == doctest::Approx(expect).epsilon(1e-13));
    std::vector<SurvivalRecord> one_event{{1.5, 1, {}}};
    CHECK(log_likelihood(ModelKind::IgGw, one_event, p) ==
          doctest::Approx(log_unconditional_density(ModelKind::IgGw, 1.5, p, 1.0)).epsilon(1e-13));
}

TEST_CASE("log_likelihood deep tail: finite on the asymptote, -inf past overflow") {
    const auto p = ig_params(1.0, 1.0, 2.0, 0.5, {});
    // z = 1e6 with xi = 2: the survival underflows as a double but the log
    // survival rides its asymptote, so the likelihood stays finite.
    std::vector<SurvivalRecord> deep{{1e6, 0, {}}, {1.0, 1, {}}};
    const double ll = log_likelihood(ModelKind::IgGw, deep, p);
    CHECK(std::isfinite(ll));
    CHECK(ll < -1e6);
    // z = 1e200 overflows z^xi itself: -inf sentinel, never NaN.
    std::vector<SurvivalRecord> beyond{{1e200, 0, {}}, {1.0, 1, {}}};
    const double far = log_likelihood(ModelKind::IgGw, beyond, p);
    CHECK(far == kNegInf);
    CHECK_FALSE(std::isnan(far));
    // Same for an event record out there.
    std::vector<SurvivalRecord> beyond_event{{1e200, 1, {}}};
    CHECK(log_likelihood(ModelKind::IgGw, beyond_event, p) == kNegInf);
}

TEST_CASE("validate_records rejects malformed data") {
    CHECK_THROWS_AS(validate_records(std::vector<SurvivalRecord>{}), std::invalid_argument);
    std::vector<SurvivalRecord> bad_time{{0.0, 1, {}}};
    CHECK_THROWS_AS(validate_records(bad_time), std::invalid_argument);
    std::vector<SurvivalRecord> bad_status{{1.0, 2, {}}};
    CHECK_THROWS_AS(validate_records(bad_status), std::invalid_argument);
    std::vector<SurvivalRecord> ragged{{1.0, 1, {1.0}}, {2.0, 0, {1.0, 2.0}}};
    CHECK_THROWS_AS(validate_records(ragged), std::invalid_argument);
    std::vector<SurvivalRecord> ok{{1.0, 1, {1.0}}, {2.0, 0, {0.0}}};
    CHECK_NOTHROW(validate_records(ok));
}

TEST_CASE("params validate catches kind and dimension mismatches") {
    const auto p = ig_params(1.0, 1.0, 1.0, 0.5, {0.1});
    CHECK_THROWS_AS(p.validate(ModelKind::GlGw, 1), std::invalid_argument);
    CHECK_THROWS_AS(p.validate(ModelKind::IgGw, 2), std::invalid_argument);
    CHECK_NOTHROW(p.validate(ModelKind::IgGw, 1));
}
