#include "frailsurv/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace frailsurv {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

bool parse_double(const std::string& raw, double& out) {
    const std::string s = trim(raw);
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last && !std::isnan(out);
}

bool parse_int(const std::string& raw, long& out) {
    double v = 0.0;
    if (!parse_double(raw, v)) return false;
    if (v != std::floor(v) || std::abs(v) > 1e9) return false;
    out = long(v);
    return true;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

// Shared scaffold for the dataset recipes: iterate rows, let `build` either
// fill a record, reject the row (by setting `why`), or both-empty to keep
// the row silently (never used; recipes always decide).
template <typename Build>
IngestResult run_recipe(const RawTable& raw, std::vector<std::string> covariate_names,
                        std::string source, Build&& build) {
    IngestResult result;
    result.dataset.covariate_names = std::move(covariate_names);
    result.dataset.source = std::move(source);
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        SurvivalRecord rec;
        std::string why;
        if (build(raw.rows[r], rec, why)) {
            result.dataset.records.push_back(std::move(rec));
        } else {
            result.rejected.push_back({raw.lines[r], std::move(why)});
        }
    }
    return result;
}

}  // namespace

std::size_t RawTable::column(const std::string& name) const {
    const auto found = find_column(name);
    if (!found) throw std::invalid_argument("missing column '" + name + "'");
    return *found;
}

std::optional<std::size_t> RawTable::find_column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    return std::nullopt;
}

RawTable parse_table(std::istream& in) {
    RawTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (!have_header) {
            for (auto& c : cells) c = trim(c);
            table.header = std::move(cells);
            have_header = true;
        } else {
            table.rows.push_back(std::move(cells));
            table.lines.push_back(line_no);
        }
    }
    if (!have_header) throw std::runtime_error("empty table: no header row");
    return table;
}

RawTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    try {
        return parse_table(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

IngestResult ingest_table(const RawTable& table, const CsvSchema& schema, std::string source) {
    for (const auto& [code, mapped] : schema.status_map)
        if (mapped != 0 && mapped != 1)
            throw std::invalid_argument("status_map values must be 0 or 1 (got " +
                                        std::to_string(mapped) + " for '" + code + "')");
    const std::size_t time_col = table.column(schema.time_column);
    const std::size_t status_col = table.column(schema.status_column);
    std::vector<std::size_t> cov_cols;
    cov_cols.reserve(schema.covariate_columns.size());
    for (const auto& name : schema.covariate_columns) cov_cols.push_back(table.column(name));

    const std::size_t arity = table.header.size();
    return run_recipe(
        table, schema.covariate_columns, std::move(source),
        [&](const std::vector<std::string>& row, SurvivalRecord& rec, std::string& why) {
            if (row.size() != arity) {
                why = "expected " + std::to_string(arity) + " cells, got " +
                      std::to_string(row.size());
                return false;
            }
            if (!parse_double(row[time_col], rec.time)) {
                why = "unparsable time '" + trim(row[time_col]) + "'";
                return false;
            }
            if (!(rec.time > 0.0) || !std::isfinite(rec.time)) {
                why = "non-positive time " + trim(row[time_col]);
                return false;
            }
            const std::string status_cell = trim(row[status_col]);
            if (!schema.status_map.empty()) {
                const auto it = schema.status_map.find(status_cell);
                if (it == schema.status_map.end()) {
                    why = "status code '" + status_cell + "' not in mapping";
                    return false;
                }
                rec.status = it->second;
            } else {
                double s = 0.0;
                if (!parse_double(status_cell, s) || (s != 0.0 && s != 1.0)) {
                    why = "status '" + status_cell + "' is not 0/1";
                    return false;
                }
                rec.status = int(s);
            }
            rec.covariates.resize(cov_cols.size());
            for (std::size_t j = 0; j < cov_cols.size(); ++j) {
                if (!parse_double(row[cov_cols[j]], rec.covariates[j]) ||
                    !std::isfinite(rec.covariates[j])) {
                    why = "unparsable covariate " + schema.covariate_columns[j] + " '" +
                          trim(row[cov_cols[j]]) + "'";
                    return false;
                }
            }
            return true;
        });
}

IngestResult read_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    return ingest_table(read_table(path), schema, path.string());
}

IngestResult preprocess_bladder(const RawTable& raw) {
    const std::size_t start_col = raw.column("start");
    const std::size_t stop_col = raw.column("stop");
    const std::size_t status_col = raw.column("status");
    const std::size_t treatment_col = raw.column("treatment");
    const std::size_t number_col = raw.column("number");
    const std::size_t size_col = raw.column("size");
    const std::size_t recur_col = raw.column("recur");

    return run_recipe(
        raw, {"K01", "K02", "K03", "K04", "K05"}, "bladder recipe",
        [&](const std::vector<std::string>& row, SurvivalRecord& rec, std::string& why) {
            if (row.size() != raw.header.size()) {
                why = "wrong cell count";
                return false;
            }
            long status = 0;
            if (!parse_int(row[status_col], status) || status < 0 || status > 3) {
                why = "unknown status code '" + trim(row[status_col]) + "'";
                return false;
            }
            if (status == 2) {
                why = "status code 2 excluded";
                return false;
            }
            rec.status = status == 1 ? 1 : 0;  // codes 0 and 3 are censored

            double start = 0.0;
            double stop = 0.0;
            if (!parse_double(row[start_col], start) || !parse_double(row[stop_col], stop)) {
                why = "unparsable start/stop";
                return false;
            }
            rec.time = stop - start;
            if (!(rec.time > 0.0)) {
                why = "non-positive survival time (stop - start)";
                return false;
            }

            // treatment arrives either as the factor label or its code
            const std::string treat = lowercase(trim(row[treatment_col]));
            double pyridoxine = 0.0;
            double thiotepa = 0.0;
            if (treat == "placebo" || treat == "1") {
            } else if (treat == "pyridoxine" || treat == "2") {
                pyridoxine = 1.0;
            } else if (treat == "thiotepa" || treat == "3") {
                thiotepa = 1.0;
            } else {
                why = "unknown treatment '" + treat + "'";
                return false;
            }
            double number = 0.0;
            double size = 0.0;
            double recur = 0.0;
            if (!parse_double(row[number_col], number) || !parse_double(row[size_col], size) ||
                !parse_double(row[recur_col], recur)) {
                why = "missing covariate cell";
                return false;
            }
            rec.covariates = {pyridoxine, thiotepa, number, size, recur};
            return true;
        });
}

IngestResult preprocess_lung(const RawTable& raw) {
    const std::size_t time_col = raw.column("time");
    const std::size_t status_col = raw.column("status");
    const std::size_t age_col = raw.column("age");
    const std::size_t sex_col = raw.column("sex");
    const std::size_t ecog_col = raw.column("ph.ecog");
    const std::size_t karno_col = raw.column("ph.karno");

    return run_recipe(
        raw, {"K01", "K02", "K03", "K04"}, "lung recipe",
        [&](const std::vector<std::string>& row, SurvivalRecord& rec, std::string& why) {
            if (row.size() != raw.header.size()) {
                why = "wrong cell count";
                return false;
            }
            long status = 0;
            if (!parse_int(row[status_col], status) || (status != 1 && status != 2)) {
                why = "status code '" + trim(row[status_col]) + "' not in {1,2}";
                return false;
            }
            rec.status = status == 2 ? 1 : 0;  // source codes 2 = death, 1 = censored

            if (!parse_double(row[time_col], rec.time) || !(rec.time > 0.0)) {
                why = "non-positive or unparsable time";
                return false;
            }
            long sex = 0;
            if (!parse_int(row[sex_col], sex) || (sex != 1 && sex != 2)) {
                why = "sex code '" + trim(row[sex_col]) + "' not in {1,2}";
                return false;
            }
            double age = 0.0;
            double ecog = 0.0;
            double karno = 0.0;
            if (!parse_double(row[age_col], age) || !parse_double(row[ecog_col], ecog) ||
                !parse_double(row[karno_col], karno)) {
                why = "missing covariate cell";
                return false;
            }
            rec.covariates = {age, sex == 1 ? 1.0 : 0.0, ecog, karno};
            return true;
        });
}

IngestResult preprocess_ovarian(const RawTable& raw) {
    const std::size_t futime_col = raw.column("futime");
    const std::size_t fustat_col = raw.column("fustat");
    const std::size_t age_col = raw.column("age");
    const std::size_t rx_col = raw.column("rx");
    const std::size_t resid_col = raw.column("resid.ds");
    const std::size_t ecog_col = raw.column("ecog.ps");

    return run_recipe(
        raw, {"K01", "K02", "K03", "K04"}, "ovarian recipe",
        [&](const std::vector<std::string>& row, SurvivalRecord& rec, std::string& why) {
            if (row.size() != raw.header.size()) {
                why = "wrong cell count";
                return false;
            }
            long fustat = 0;
            if (!parse_int(row[fustat_col], fustat) || (fustat != 0 && fustat != 1)) {
                why = "fustat '" + trim(row[fustat_col]) + "' is not 0/1";
                return false;
            }
            rec.status = int(fustat);
            if (!parse_double(row[futime_col], rec.time) || !(rec.time > 0.0)) {
                why = "non-positive or unparsable futime";
                return false;
            }
            long rx = 0;
            long resid = 0;
            long ecog = 0;
            if (!parse_int(row[rx_col], rx) || (rx != 1 && rx != 2) ||
                !parse_int(row[resid_col], resid) || (resid != 1 && resid != 2) ||
                !parse_int(row[ecog_col], ecog) || (ecog != 1 && ecog != 2)) {
                why = "rx/resid.ds/ecog.ps code outside {1,2}";
                return false;
            }
            double age = 0.0;
            if (!parse_double(row[age_col], age)) {
                why = "missing age";
                return false;
            }
            rec.covariates = {age, rx == 2 ? 1.0 : 0.0, resid == 2 ? 1.0 : 0.0,
                              ecog == 1 ? 1.0 : 0.0};
            return true;
        });
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {
std::string format_or_na(double x) { return std::isnan(x) ? "NA" : format_double(x); }
}  // namespace

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
    if (!data.records.empty() &&
        data.records.front().covariates.size() != data.covariate_names.size())
        throw std::invalid_argument("dataset covariate names do not match record width");
    std::ofstream out = open_for_write(path);
    out << "time,status";
    for (const auto& name : data.covariate_names) out << ',' << name;
    out << '\n';
    for (const auto& rec : data.records) {
        out << format_double(rec.time) << ',' << rec.status;
        for (double c : rec.covariates) out << ',' << format_double(c);
        out << '\n';
    }
}

void write_chain_csv(const std::filesystem::path& path, const Chain& chain) {
    if (chain.draws.size() != chain.log_posteriors.size())
        throw std::invalid_argument("chain draws/log_posteriors misaligned");
    std::ofstream out = open_for_write(path);
    for (const auto& name : chain.param_names) out << name << ',';
    out << "log_posterior\n";
    for (std::size_t i = 0; i < chain.draws.size(); ++i) {
        for (double v : chain.draws[i]) out << format_double(v) << ',';
        out << format_double(chain.log_posteriors[i]) << '\n';
    }
}

Chain read_chain_csv(const std::filesystem::path& path) {
    const RawTable table = read_table(path);
    if (table.header.empty() || table.header.back() != "log_posterior")
        throw std::runtime_error(path.string() + ": last column must be log_posterior");
    Chain chain;
    chain.param_names.assign(table.header.begin(), table.header.end() - 1);
    const std::size_t dim = chain.param_names.size();
    chain.draws.reserve(table.rows.size());
    chain.log_posteriors.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != dim + 1)
            throw std::runtime_error(path.string() + ": line " + std::to_string(table.lines[r]) +
                                     ": wrong cell count");
        std::vector<double> draw(dim);
        for (std::size_t j = 0; j <= dim; ++j) {
            double v = 0.0;
            if (!parse_double(row[j], v))
                throw std::runtime_error(path.string() + ": line " +
                                         std::to_string(table.lines[r]) + ": unparsable value '" +
                                         trim(row[j]) + "'");
            if (j < dim)
                draw[j] = v;
            else
                chain.log_posteriors.push_back(v);
        }
        chain.draws.push_back(std::move(draw));
    }
    return chain;
}

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<PosteriorSummary>& rows) {
    std::ofstream out = open_for_write(path);
    out << "Parameter,Estimate,s.e.,L.C.L.,U.C.L.,Geweke test,p-value,Gelman-Rubin\n";
    for (const auto& row : rows) {
        out << row.name << ',' << format_double(row.estimate) << ',' << format_double(row.se)
            << ',' << format_double(row.lower) << ',' << format_double(row.upper) << ','
            << format_double(row.geweke_z) << ',' << format_double(row.geweke_p) << ','
            << format_or_na(row.psrf) << '\n';
    }
}

void write_criteria_csv(const std::filesystem::path& path, const std::vector<CriteriaRow>& rows) {
    std::ofstream out = open_for_write(path);
    out << "Model,AIC,BIC,AICc,HQIC\n";
    for (const auto& row : rows) {
        out << row.model << ',' << format_double(row.criteria.aic) << ','
            << format_double(row.criteria.bic) << ','
            << (row.criteria.aicc ? format_double(*row.criteria.aicc) : std::string("NA")) << ','
            << format_double(row.criteria.hqic) << '\n';
    }
}

void write_plot_csv(const std::filesystem::path& path, const std::vector<PlotPoint>& points) {
    std::ofstream out = open_for_write(path);
    out << "time,km_survival,model_survival\n";
    for (const auto& pt : points)
        out << format_double(pt.time) << ',' << format_double(pt.km_survival) << ','
            << format_double(pt.model_survival) << '\n';
}

void write_ks_csv(const std::filesystem::path& path, const KsResult& ks) {
    std::ofstream out = open_for_write(path);
    out << "D,p-value,note\n";
    out << format_double(ks.statistic) << ',' << format_double(ks.p_value)
        << ",asymptotic Kolmogorov p-value with n = event count; approximate under censoring\n";
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : bytes) {
        h ^= std::uint64_t(static_cast<unsigned char>(c));
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a_hex(std::string_view bytes) {
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
    return out;
}

std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a_hex(buf.str());
}

}  // namespace frailsurv
