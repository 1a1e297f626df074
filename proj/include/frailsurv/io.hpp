#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frailsurv/bayes.hpp"
#include "frailsurv/diagnostics.hpp"
#include "frailsurv/models.hpp"
#include "frailsurv/modelsel.hpp"

namespace frailsurv {

// Parsed CSV: header plus string cells. Source line numbers ride along so
// row-level diagnostics can point back into the file (line 1 = header).
struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;  // 1-based file line per row

    std::size_t column(const std::string& name) const;  // throws when absent
    std::optional<std::size_t> find_column(const std::string& name) const;
};

RawTable parse_table(std::istream& in);
RawTable read_table(const std::filesystem::path& path);

struct Dataset {
    std::vector<SurvivalRecord> records;
    std::vector<std::string> covariate_names;
    std::string source;
};

struct RowIssue {
    std::size_t line = 0;  // 1-based line in the source file
    std::string message;
};

// Ingestion never silently fixes a row: anything unusable (or excluded by a
// preprocessing recipe) lands in `rejected` with its line number.
struct IngestResult {
    Dataset dataset;
    std::vector<RowIssue> rejected;
};

// Column mapping for plain datasets. Status cells must literally be 0 or 1
// unless status_map gives an explicit recode of raw cell text.
struct CsvSchema {
    std::string time_column = "time";
    std::string status_column = "status";
    std::vector<std::string> covariate_columns;
    std::map<std::string, int> status_map;
};

IngestResult ingest_table(const RawTable& table, const CsvSchema& schema, std::string source);
IngestResult read_csv(const std::filesystem::path& path, const CsvSchema& schema);

// Recipes for the three public cancer datasets (R `survival` exports).
// bladder1: drops raw status 2, time = stop - start, status 3 -> 0,
//           covariates pyridoxine / thiotepa indicators, number, size, recur.
// lung:     status 2 -> event, 1 -> censored; covariates age, male indicator,
//           ph.ecog, ph.karno; rows with missing cells dropped.
// ovarian:  futime / fustat; covariates age, rx==2, resid.ds==2, ecog.ps==1.
IngestResult preprocess_bladder(const RawTable& raw);
IngestResult preprocess_lung(const RawTable& raw);
IngestResult preprocess_ovarian(const RawTable& raw);

// Round-trip-exact decimal formatting (%.17g) shared by every writer.
std::string format_double(double x);

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);

// One row per retained draw, parameter columns then log_posterior.
void write_chain_csv(const std::filesystem::path& path, const Chain& chain);
Chain read_chain_csv(const std::filesystem::path& path);

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<PosteriorSummary>& rows);

struct CriteriaRow {
    std::string model;
    InfoCriteria criteria;
};
void write_criteria_csv(const std::filesystem::path& path, const std::vector<CriteriaRow>& rows);

void write_plot_csv(const std::filesystem::path& path, const std::vector<PlotPoint>& points);

void write_ks_csv(const std::filesystem::path& path, const KsResult& ks);

// FNV-1a digests for the run manifest.
std::uint64_t fnv1a(std::string_view bytes);
std::string fnv1a_hex(std::string_view bytes);
std::string file_checksum(const std::filesystem::path& path);

}  // namespace frailsurv
