#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "frailsurv/bayes.hpp"
#include "frailsurv/io.hpp"
#include "frailsurv/simulate.hpp"

namespace frailsurv {

// Where the data comes from: a plain CSV described by `schema`, or one of
// the named preprocessing recipes (which fix their own schema).
struct DatasetConfig {
    std::string path;
    std::string recipe = "none";  // none | bladder | lung | ovarian
    CsvSchema schema;             // consulted only when recipe == none
};

// Everything a run needs, resolved from one JSON config file.
struct AppConfig {
    ModelKind model = ModelKind::IgGw;
    std::optional<DatasetConfig> dataset;
    PriorConfig priors;
    McmcConfig mcmc;
    std::optional<SimConfig> simulate;
};

// Strict parse: unknown keys, wrong types, or missing required keys raise
// std::runtime_error with the offending key path in the message.
// model_override replaces the file's model before dependent sections
// (simulate) are interpreted, so a --model flag stays self-consistent.
AppConfig parse_config(const std::string& text, const std::string& origin,
                       std::optional<ModelKind> model_override = {});
AppConfig load_config(const std::filesystem::path& path,
                      std::optional<ModelKind> model_override = {});

// Canonical JSON echo of the fully resolved config (defaults filled in).
std::string dump_config(const AppConfig& cfg);

// Reads and preprocesses per the recipe; source records path + recipe.
IngestResult load_dataset(const DatasetConfig& dc);

}  // namespace frailsurv
