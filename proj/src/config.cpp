#include "frailsurv/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace frailsurv {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::runtime_error("config: " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) fail(where, "unknown key '" + key + "'");
}

double get_double(const json& obj, const std::string& where, const std::string& key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where, "'" + key + "' must be a number");
    return v.get<double>();
}

double require_double(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) fail(where, "missing required key '" + key + "'");
    return get_double(obj, where, key, 0.0);
}

std::uint64_t get_uint(const json& obj, const std::string& where, const std::string& key,
                       std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) fail(where, "'" + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

bool get_bool(const json& obj, const std::string& where, const std::string& key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(where, "'" + key + "' must be a boolean");
    return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& where, const std::string& key,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(where, "'" + key + "' must be a string");
    return v.get<std::string>();
}

ScalarPrior parse_scalar_prior(const json& obj, const std::string& where) {
    check_keys(obj, where, {"type", "shape", "rate", "lower", "upper"});
    const std::string type = get_string(obj, where, "type", "");
    if (type == "gamma") {
        if (obj.contains("lower") || obj.contains("upper"))
            fail(where, "gamma prior takes shape/rate, not lower/upper");
        GammaPrior p;
        p.shape = get_double(obj, where, "shape", p.shape);
        p.rate = get_double(obj, where, "rate", p.rate);
        return p;
    }
    if (type == "uniform") {
        if (obj.contains("shape") || obj.contains("rate"))
            fail(where, "uniform prior takes lower/upper, not shape/rate");
        UniformPrior p;
        p.lower = get_double(obj, where, "lower", p.lower);
        p.upper = get_double(obj, where, "upper", p.upper);
        return p;
    }
    fail(where, "'type' must be \"gamma\" or \"uniform\"");
}

PriorConfig parse_priors(const json& obj) {
    PriorConfig priors;
    check_keys(obj, "priors", {"baseline", "frailty", "beta"});
    if (obj.contains("baseline")) {
        const json& b = obj.at("baseline");
        check_keys(b, "priors.baseline", {"zeta", "delta", "xi"});
        const char* names[3] = {"zeta", "delta", "xi"};
        for (int i = 0; i < 3; ++i)
            if (b.contains(names[i]))
                priors.baseline[i] =
                    parse_scalar_prior(b.at(names[i]), std::string("priors.baseline.") + names[i]);
    }
    if (obj.contains("frailty")) {
        const json& f = obj.at("frailty");
        check_keys(f, "priors.frailty", {"shape", "rate"});
        priors.frailty.shape = get_double(f, "priors.frailty", "shape", priors.frailty.shape);
        priors.frailty.rate = get_double(f, "priors.frailty", "rate", priors.frailty.rate);
    }
    if (obj.contains("beta")) {
        const json& b = obj.at("beta");
        check_keys(b, "priors.beta", {"mean", "variance"});
        priors.beta.mean = get_double(b, "priors.beta", "mean", priors.beta.mean);
        priors.beta.variance = get_double(b, "priors.beta", "variance", priors.beta.variance);
    }
    priors.validate();
    return priors;
}

McmcConfig parse_mcmc(const json& obj) {
    McmcConfig cfg;
    check_keys(obj, "mcmc",
               {"iterations", "burn_in", "thin", "chains", "seed", "step_sizes", "adapt",
                "target_acceptance", "progress_interval"});
    cfg.iterations = get_uint(obj, "mcmc", "iterations", cfg.iterations);
    cfg.burn_in = get_uint(obj, "mcmc", "burn_in", cfg.burn_in);
    cfg.thin = get_uint(obj, "mcmc", "thin", cfg.thin);
    cfg.chains = unsigned(get_uint(obj, "mcmc", "chains", cfg.chains));
    cfg.seed = get_uint(obj, "mcmc", "seed", cfg.seed);
    cfg.adapt = get_bool(obj, "mcmc", "adapt", cfg.adapt);
    cfg.target_acceptance =
        get_double(obj, "mcmc", "target_acceptance", cfg.target_acceptance);
    cfg.progress_interval = get_uint(obj, "mcmc", "progress_interval", cfg.progress_interval);
    if (obj.contains("step_sizes")) {
        const json& s = obj.at("step_sizes");
        if (!s.is_array()) fail("mcmc", "'step_sizes' must be an array of numbers");
        for (const json& v : s) {
            if (!v.is_number()) fail("mcmc.step_sizes", "entries must be numbers");
            cfg.step_sizes.push_back(v.get<double>());
        }
    }
    cfg.validate();
    return cfg;
}

DatasetConfig parse_dataset(const json& obj) {
    DatasetConfig dc;
    check_keys(obj, "dataset",
               {"path", "recipe", "time", "status", "covariates", "status_map"});
    dc.path = get_string(obj, "dataset", "path", "");
    if (dc.path.empty()) fail("dataset", "missing required key 'path'");
    dc.recipe = get_string(obj, "dataset", "recipe", dc.recipe);
    const bool has_schema_keys = obj.contains("time") || obj.contains("status") ||
                                 obj.contains("covariates") || obj.contains("status_map");
    if (dc.recipe != "none") {
        if (dc.recipe != "bladder" && dc.recipe != "lung" && dc.recipe != "ovarian")
            fail("dataset", "unknown recipe '" + dc.recipe + "'");
        if (has_schema_keys)
            fail("dataset", "schema keys (time/status/covariates/status_map) only apply to "
                            "recipe \"none\"");
        return dc;
    }
    dc.schema.time_column = get_string(obj, "dataset", "time", dc.schema.time_column);
    dc.schema.status_column = get_string(obj, "dataset", "status", dc.schema.status_column);
    if (obj.contains("covariates")) {
        const json& cov = obj.at("covariates");
        if (!cov.is_array()) fail("dataset", "'covariates' must be an array of column names");
        for (const json& v : cov) {
            if (!v.is_string()) fail("dataset.covariates", "entries must be strings");
            dc.schema.covariate_columns.push_back(v.get<std::string>());
        }
    }
    if (obj.contains("status_map")) {
        const json& m = obj.at("status_map");
        if (!m.is_object()) fail("dataset", "'status_map' must map raw codes to 0/1");
        for (const auto& [key, v] : m.items()) {
            if (!v.is_number_integer()) fail("dataset.status_map", "values must be 0 or 1");
            const long code = v.get<long>();
            if (code != 0 && code != 1) fail("dataset.status_map", "values must be 0 or 1");
            dc.schema.status_map[key] = int(code);
        }
    }
    return dc;
}

SimConfig parse_simulate(const json& obj, ModelKind model) {
    SimConfig sim;
    sim.kind = model;
    check_keys(obj, "simulate",
               {"n", "zeta", "delta", "xi", "eta", "epsilon", "beta", "covariates",
                "bernoulli_prob", "censoring_rate", "seed"});
    sim.n = std::size_t(get_uint(obj, "simulate", "n", 0));
    if (sim.n == 0) fail("simulate", "missing or zero 'n'");
    GwParams baseline{require_double(obj, "simulate", "zeta"),
                      require_double(obj, "simulate", "delta"),
                      require_double(obj, "simulate", "xi")};
    sim.params.baseline = baseline;
    const double eta = require_double(obj, "simulate", "eta");
    if (model == ModelKind::IgGw) {
        if (obj.contains("epsilon")) fail("simulate", "'epsilon' only applies to model gl-gw");
        sim.params.frailty = IgFrailty{eta};
    } else {
        sim.params.frailty = GlFrailty{eta, require_double(obj, "simulate", "epsilon")};
    }
    if (!obj.contains("beta")) fail("simulate", "missing required key 'beta'");
    const json& beta = obj.at("beta");
    if (!beta.is_array()) fail("simulate", "'beta' must be an array of numbers");
    for (const json& v : beta) {
        if (!v.is_number()) fail("simulate.beta", "entries must be numbers");
        sim.params.beta.push_back(v.get<double>());
    }
    const std::string law = get_string(obj, "simulate", "covariates", "bernoulli");
    if (law == "bernoulli")
        sim.covariates = CovariateKind::Bernoulli;
    else if (law == "normal")
        sim.covariates = CovariateKind::Normal;
    else
        fail("simulate", "'covariates' must be \"bernoulli\" or \"normal\"");
    sim.bernoulli_prob = get_double(obj, "simulate", "bernoulli_prob", sim.bernoulli_prob);
    sim.censoring_rate = get_double(obj, "simulate", "censoring_rate", sim.censoring_rate);
    sim.seed = get_uint(obj, "simulate", "seed", sim.seed);
    sim.validate();
    return sim;
}

json scalar_prior_to_json(const ScalarPrior& prior) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GammaPrior>)
                return {{"type", "gamma"}, {"shape", p.shape}, {"rate", p.rate}};
            else
                return {{"type", "uniform"}, {"lower", p.lower}, {"upper", p.upper}};
        },
        prior);
}

}  // namespace

AppConfig parse_config(const std::string& text, const std::string& origin,
                       std::optional<ModelKind> model_override) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config: " + origin + ": " + e.what());
    }
    check_keys(root, origin, {"model", "dataset", "priors", "mcmc", "simulate"});

    AppConfig cfg;
    const std::string model = get_string(root, origin, "model", "ig-gw");
    try {
        cfg.model = model_kind_from_string(model);
    } catch (const std::exception&) {
        fail(origin, "'model' must be \"ig-gw\" or \"gl-gw\"");
    }
    if (model_override) cfg.model = *model_override;
    if (root.contains("priors")) cfg.priors = parse_priors(root.at("priors"));
    if (root.contains("mcmc")) cfg.mcmc = parse_mcmc(root.at("mcmc"));
    if (root.contains("dataset")) cfg.dataset = parse_dataset(root.at("dataset"));
    if (root.contains("simulate")) cfg.simulate = parse_simulate(root.at("simulate"), cfg.model);
    return cfg;
}

AppConfig load_config(const std::filesystem::path& path,
                      std::optional<ModelKind> model_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("config: cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string(), model_override);
}

std::string dump_config(const AppConfig& cfg) {
    json root;
    root["model"] = to_string(cfg.model);
    if (cfg.dataset) {
        json d;
        d["path"] = cfg.dataset->path;
        d["recipe"] = cfg.dataset->recipe;
        if (cfg.dataset->recipe == "none") {
            d["time"] = cfg.dataset->schema.time_column;
            d["status"] = cfg.dataset->schema.status_column;
            d["covariates"] = cfg.dataset->schema.covariate_columns;
            if (!cfg.dataset->schema.status_map.empty()) {
                json m;
                for (const auto& [k, v] : cfg.dataset->schema.status_map) m[k] = v;
                d["status_map"] = m;
            }
        }
        root["dataset"] = d;
    }
    json priors;
    priors["baseline"] = {{"zeta", scalar_prior_to_json(cfg.priors.baseline[0])},
                          {"delta", scalar_prior_to_json(cfg.priors.baseline[1])},
                          {"xi", scalar_prior_to_json(cfg.priors.baseline[2])}};
    priors["frailty"] = {{"shape", cfg.priors.frailty.shape}, {"rate", cfg.priors.frailty.rate}};
    priors["beta"] = {{"mean", cfg.priors.beta.mean}, {"variance", cfg.priors.beta.variance}};
    root["priors"] = priors;
    json mcmc;
    mcmc["iterations"] = cfg.mcmc.iterations;
    mcmc["burn_in"] = cfg.mcmc.burn_in;
    mcmc["thin"] = cfg.mcmc.thin;
    mcmc["chains"] = cfg.mcmc.chains;
    mcmc["seed"] = cfg.mcmc.seed;
    mcmc["adapt"] = cfg.mcmc.adapt;
    mcmc["target_acceptance"] = cfg.mcmc.target_acceptance;
    mcmc["progress_interval"] = cfg.mcmc.progress_interval;
    mcmc["step_sizes"] = cfg.mcmc.step_sizes;
    root["mcmc"] = mcmc;
    if (cfg.simulate) {
        json s;
        s["n"] = cfg.simulate->n;
        s["zeta"] = cfg.simulate->params.baseline.zeta;
        s["delta"] = cfg.simulate->params.baseline.delta;
        s["xi"] = cfg.simulate->params.baseline.xi;
        if (const auto* ig = std::get_if<IgFrailty>(&cfg.simulate->params.frailty)) {
            s["eta"] = ig->eta;
        } else {
            const auto& gl = std::get<GlFrailty>(cfg.simulate->params.frailty);
            s["eta"] = gl.eta;
            s["epsilon"] = gl.epsilon;
        }
        s["beta"] = cfg.simulate->params.beta;
        s["covariates"] =
            cfg.simulate->covariates == CovariateKind::Bernoulli ? "bernoulli" : "normal";
        s["bernoulli_prob"] = cfg.simulate->bernoulli_prob;
        s["censoring_rate"] = cfg.simulate->censoring_rate;
        s["seed"] = cfg.simulate->seed;
        root["simulate"] = s;
    }
    return root.dump(2) + "\n";
}

IngestResult load_dataset(const DatasetConfig& dc) {
    if (dc.recipe == "none") return read_csv(dc.path, dc.schema);
    const RawTable raw = read_table(dc.path);
    IngestResult result;
    if (dc.recipe == "bladder")
        result = preprocess_bladder(raw);
    else if (dc.recipe == "lung")
        result = preprocess_lung(raw);
    else if (dc.recipe == "ovarian")
        result = preprocess_ovarian(raw);
    else
        throw std::runtime_error("config: dataset: unknown recipe '" + dc.recipe + "'");
    result.dataset.source = dc.path + " (" + result.dataset.source + ")";
    return result;
}

}  // namespace frailsurv
