#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "frailsurv/config.hpp"
#include "frailsurv/io.hpp"
#include "frailsurv/report.hpp"
#include "frailsurv/version.hpp"

namespace fs = std::filesystem;
using namespace frailsurv;

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct ManifestWriter {
    std::string command;
    std::string config_checksum;
    std::uint64_t seed = 0;
    std::string started = utc_timestamp();
    std::vector<fs::path> outputs;

    void add(const fs::path& p) { outputs.push_back(p); }

    void write(const fs::path& out_dir) const {
        nlohmann::json m;
        m["command"] = command;
        m["config_checksum"] = config_checksum;
        m["seed"] = seed;
        m["started"] = started;
        m["finished"] = utc_timestamp();
        m["version"] = kVersion;
        nlohmann::json files = nlohmann::json::array();
        for (const auto& p : outputs)
            files.push_back({{"path", p.filename().string()}, {"checksum", file_checksum(p)}});
        m["outputs"] = files;
        std::ofstream out(out_dir / "manifest.json", std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for writing: manifest.json");
        out << m.dump(2) << '\n';
    }
};

// Flags shared by the config-driven commands.
struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> model;
    std::optional<std::uint64_t> iters;
    std::optional<std::uint64_t> burn_in;
    std::optional<std::uint64_t> thin;
    bool quiet = false;
    bool dump = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts, bool with_mcmc_overrides) {
    cmd->add_option("--config", opts.config_path, "JSON run configuration")->required();
    cmd->add_option("--out", opts.out_dir, "output directory (created if missing)");
    cmd->add_option("--seed", opts.seed, "override the config seed");
    cmd->add_option("--model", opts.model, "override the model (ig-gw | gl-gw)");
    if (with_mcmc_overrides) {
        cmd->add_option("--iters", opts.iters, "override mcmc.iterations");
        cmd->add_option("--burn-in", opts.burn_in, "override mcmc.burn_in");
        cmd->add_option("--thin", opts.thin, "override mcmc.thin");
    }
    cmd->add_flag("--quiet", opts.quiet, "suppress progress output");
    cmd->add_flag("--dump-config", opts.dump, "print the resolved config as JSON and exit");
}

AppConfig resolve_config(const CommonOpts& opts, std::string& config_bytes) {
    std::optional<ModelKind> model;
    if (opts.model) model = model_kind_from_string(*opts.model);
    config_bytes = read_file(opts.config_path);
    AppConfig cfg = parse_config(config_bytes, opts.config_path, model);
    if (opts.seed) {
        cfg.mcmc.seed = *opts.seed;
        if (cfg.simulate) cfg.simulate->seed = *opts.seed;
    }
    if (opts.iters) cfg.mcmc.iterations = *opts.iters;
    if (opts.burn_in) cfg.mcmc.burn_in = *opts.burn_in;
    if (opts.thin) cfg.mcmc.thin = *opts.thin;
    cfg.mcmc.validate();
    return cfg;
}

void report_rejections(const IngestResult& loaded) {
    if (loaded.rejected.empty()) return;
    std::cerr << "note: dropped " << loaded.rejected.size() << " rows during ingestion\n";
    const std::size_t shown = std::min<std::size_t>(loaded.rejected.size(), 5);
    for (std::size_t i = 0; i < shown; ++i)
        std::cerr << "  line " << loaded.rejected[i].line << ": " << loaded.rejected[i].message
                  << '\n';
    if (shown < loaded.rejected.size())
        std::cerr << "  ... and " << (loaded.rejected.size() - shown) << " more\n";
}

int cmd_fit(const CommonOpts& opts) {
    std::string config_bytes;
    AppConfig cfg = resolve_config(opts, config_bytes);
    if (opts.dump) {
        std::cout << dump_config(cfg);
        return 0;
    }
    if (!cfg.dataset) throw std::runtime_error("config: fit requires a dataset section");
    if (cfg.mcmc.retained() < 100)
        throw std::runtime_error(
            "config: fit requires at least 100 retained draws per chain "
            "((iterations - burn_in) / thin >= 100)");

    const IngestResult loaded = load_dataset(*cfg.dataset);
    if (!opts.quiet) report_rejections(loaded);
    if (loaded.dataset.records.empty()) throw std::runtime_error("dataset: no usable records");
    std::cerr << "fit: " << loaded.dataset.records.size() << " records from "
              << loaded.dataset.source << '\n';

    McmcConfig mcmc = cfg.mcmc;
    if (opts.quiet) mcmc.progress_interval = 0;
    if (!opts.quiet && mcmc.progress_interval == 0)
        mcmc.progress_interval = std::max<std::uint64_t>(1, mcmc.iterations / 10);
    std::ostream* progress = opts.quiet ? nullptr : &std::cerr;

    const FitReport rep =
        build_fit_report(cfg.model, loaded.dataset.records, mcmc, cfg.priors, progress);

    const fs::path out_dir(opts.out_dir);
    fs::create_directories(out_dir);
    ManifestWriter manifest{"fit", fnv1a_hex(config_bytes), cfg.mcmc.seed};
    for (std::size_t c = 0; c < rep.chains.size(); ++c) {
        const fs::path p = out_dir / ("chain_" + std::to_string(c + 1) + ".csv");
        write_chain_csv(p, rep.chains[c]);
        manifest.add(p);
    }
    const fs::path summary = out_dir / "summary.csv";
    write_summary_csv(summary, rep.summaries);
    manifest.add(summary);
    const fs::path criteria = out_dir / "criteria.csv";
    write_criteria_csv(criteria, {{display_name(rep.kind), rep.criteria}});
    manifest.add(criteria);
    const fs::path ks = out_dir / "ks.csv";
    write_ks_csv(ks, rep.ks);
    manifest.add(ks);
    const fs::path plot = out_dir / "plot.csv";
    write_plot_csv(plot, rep.plot);
    manifest.add(plot);
    manifest.write(out_dir);
    std::cerr << "fit: wrote " << (rep.chains.size() + 4) << " artifacts to " << out_dir.string()
              << '\n';
    return 0;
}

int cmd_simulate(const CommonOpts& opts) {
    std::string config_bytes;
    AppConfig cfg = resolve_config(opts, config_bytes);
    if (opts.dump) {
        std::cout << dump_config(cfg);
        return 0;
    }
    if (!cfg.simulate) throw std::runtime_error("config: simulate requires a simulate section");

    const std::vector<SurvivalRecord> records = simulate_dataset(*cfg.simulate);
    Dataset data;
    data.records = records;
    for (std::size_t j = 0; j < cfg.simulate->params.beta.size(); ++j) {
        char name[8];
        std::snprintf(name, sizeof name, "K%02zu", j + 1);
        data.covariate_names.push_back(name);
    }
    data.source = "simulated";

    const fs::path out_dir(opts.out_dir);
    fs::create_directories(out_dir);
    ManifestWriter manifest{"simulate", fnv1a_hex(config_bytes), cfg.simulate->seed};
    const fs::path dataset = out_dir / "dataset.csv";
    write_dataset_csv(dataset, data);
    manifest.add(dataset);
    manifest.write(out_dir);
    std::size_t events = 0;
    for (const auto& r : records) events += std::size_t(r.status);
    std::cerr << "simulate: " << records.size() << " records (" << events << " events) to "
              << dataset.string() << '\n';
    return 0;
}

int cmd_diagnose(const std::vector<std::string>& chain_paths, const std::string& out_dir_str) {
    std::vector<Chain> chains;
    chains.reserve(chain_paths.size());
    for (const auto& p : chain_paths) chains.push_back(read_chain_csv(p));
    const std::vector<PosteriorSummary> rows = summarize_fit(chains);

    const fs::path out_dir(out_dir_str);
    fs::create_directories(out_dir);
    ManifestWriter manifest{"diagnose", "", 0};
    const fs::path summary = out_dir / "summary.csv";
    write_summary_csv(summary, rows);
    manifest.add(summary);
    manifest.write(out_dir);
    std::cerr << "diagnose: " << rows.size() << " parameters from " << chains.size()
              << " chain file(s)\n";
    return 0;
}

int cmd_compare(const std::vector<std::string>& fit_dirs, const std::string& out_dir_str) {
    if (fit_dirs.size() < 2)
        throw std::runtime_error("compare requires at least two fit directories");
    std::vector<CriteriaRow> rows;
    for (const auto& dir : fit_dirs) {
        const RawTable table = read_table(fs::path(dir) / "criteria.csv");
        const std::size_t model_col = table.column("Model");
        const std::size_t aic_col = table.column("AIC");
        const std::size_t bic_col = table.column("BIC");
        const std::size_t aicc_col = table.column("AICc");
        const std::size_t hqic_col = table.column("HQIC");
        for (const auto& row : table.rows) {
            CriteriaRow out;
            out.model = row[model_col];
            out.criteria.aic = std::stod(row[aic_col]);
            out.criteria.bic = std::stod(row[bic_col]);
            if (row[aicc_col] != "NA") out.criteria.aicc = std::stod(row[aicc_col]);
            out.criteria.hqic = std::stod(row[hqic_col]);
            rows.push_back(std::move(out));
        }
    }
    const fs::path out_dir(out_dir_str);
    fs::create_directories(out_dir);
    ManifestWriter manifest{"compare", "", 0};
    const fs::path comparison = out_dir / "comparison.csv";
    write_criteria_csv(comparison, rows);
    manifest.add(comparison);
    manifest.write(out_dir);
    std::cerr << "compare: merged " << rows.size() << " model rows from " << fit_dirs.size()
              << " fit(s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shared-frailty survival models (IG-GW, GL-GW)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("frailsurv ") + kVersion);

    CommonOpts fit_opts;
    CLI::App* fit = app.add_subcommand("fit", "fit a model to a dataset and emit report files");
    add_common_flags(fit, fit_opts, true);

    CommonOpts sim_opts;
    CLI::App* simulate = app.add_subcommand("simulate", "generate a synthetic dataset");
    add_common_flags(simulate, sim_opts, false);

    std::vector<std::string> chain_paths;
    std::string diag_out = ".";
    CLI::App* diagnose = app.add_subcommand("diagnose", "summarize existing chain CSVs");
    diagnose->add_option("chains", chain_paths, "chain CSV files")->required()->expected(-1);
    diagnose->add_option("--out", diag_out, "output directory");

    std::vector<std::string> fit_dirs;
    std::string cmp_out = ".";
    CLI::App* compare = app.add_subcommand("compare", "merge criteria tables from fit outputs");
    compare->add_option("fits", fit_dirs, "fit output directories")->required()->expected(-1);
    compare->add_option("--out", cmp_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return cmd_fit(fit_opts);
        if (simulate->parsed()) return cmd_simulate(sim_opts);
        if (diagnose->parsed()) return cmd_diagnose(chain_paths, diag_out);
        if (compare->parsed()) return cmd_compare(fit_dirs, cmp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
