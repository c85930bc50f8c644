#pragma once

#include <zlib.h>

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "cepclust/clustering.hpp"
#include "cepclust/dataset.hpp"
#include "cepclust/errors.hpp"
#include "cepclust/evaluation.hpp"
#include "cepclust/lti.hpp"
#include "cepclust/signal.hpp"
#include "cepclust/spectral.hpp"

namespace cepclust::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Raw text files; a ".gz" suffix selects gzip.

inline bool is_gzip_path(const std::filesystem::path& p) { return p.extension() == ".gz"; }

inline std::string read_text(const std::filesystem::path& path) {
    if (is_gzip_path(path)) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (!f) throw IoError("cannot open " + path.string() + " for reading");
        std::string out;
        char buf[1 << 16];
        int got;
        while ((got = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(got));
        const bool bad = got < 0;
        gzclose(f);
        if (bad) throw IoError("corrupt gzip stream in " + path.string());
        return out;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    if (is_gzip_path(path)) {
        gzFile f = gzopen(path.c_str(), "wb");
        if (!f) throw IoError("cannot open " + path.string() + " for writing");
        const int wrote = text.empty() ? 0 : gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
        gzclose(f);
        if (wrote != static_cast<int>(text.size())) throw IoError("short write to " + path.string());
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Numbers and CSV fields

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s, const std::string& where) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
        throw ParseError(where + ": '" + std::string(s) + "' is not a number");
    }
    return v;
}

inline long long parse_integer(std::string_view s, const std::string& where) {
    long long v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
        throw ParseError(where + ": '" + std::string(s) + "' is not an integer");
    }
    return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    for (auto& f : out) {
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    }
    return out;
}

/// Non-empty lines with their 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t start = 0, number = 0;
    while (start <= text.size()) {
        const std::size_t pos = text.find('\n', start);
        std::string_view line = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        ++number;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) out.emplace_back(number, line);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Series CSV: pair_id,role,k,value

inline std::string series_csv(const std::vector<IOPair>& pairs) {
    std::string out = "pair_id,role,k,value\n";
    for (const auto& p : pairs) {
        for (const auto* role : {"input", "output"}) {
            const TimeSeries& s = std::string_view(role) == "input" ? p.input : p.output;
            for (std::size_t k = 0; k < s.size(); ++k) {
                out += std::to_string(p.pair_id);
                out += ',';
                out += role;
                out += ',';
                out += std::to_string(k);
                out += ',';
                out += format_double(s[k]);
                out += '\n';
            }
        }
    }
    return out;
}

using SeriesTable = std::map<std::size_t, std::map<std::string, std::vector<double>>>;

/// Raw rows grouped by pair_id and role. Sample indices must run 0..N-1 in
/// order within each (pair_id, role).
inline SeriesTable parse_series_table(std::string_view text, const std::string& source = "series csv") {
    const auto lines = lines_of(text);
    if (lines.empty() || split(lines.front().second) != std::vector<std::string_view>{"pair_id", "role", "k", "value"}) {
        throw ParseError(source + ": expected header 'pair_id,role,k,value'");
    }
    SeriesTable data;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [number, line] = lines[i];
        const std::string where = source + " line " + std::to_string(number);
        const auto f = split(line);
        if (f.size() != 4) throw ParseError(where + ": expected 4 fields, got " + std::to_string(f.size()));
        const long long id = parse_integer(f[0], where);
        if (id < 0) throw ParseError(where + ": negative pair_id");
        const std::string role(f[1]);
        if (role != "input" && role != "output") throw ParseError(where + ": role must be input or output");
        const long long k = parse_integer(f[2], where);
        auto& vec = data[static_cast<std::size_t>(id)][role];
        if (k != static_cast<long long>(vec.size())) {
            throw ParseError(where + ": sample index " + std::to_string(k) + " out of order (expected " +
                             std::to_string(vec.size()) + ")");
        }
        vec.push_back(parse_double(f[3], where));
    }
    return data;
}

/// Pairs ordered by pair_id; every pair needs both roles.
inline std::vector<IOPair> parse_series_csv(std::string_view text, double sample_period = 1.0,
                                            const std::string& source = "series csv") {
    std::vector<IOPair> out;
    for (auto& [id, roles] : parse_series_table(text, source)) {
        if (!roles.count("input") || !roles.count("output")) {
            throw ParseError(source + ": pair " + std::to_string(id) + " lacks an input or output series");
        }
        out.emplace_back(TimeSeries(std::move(roles["input"]), sample_period),
                         TimeSeries(std::move(roles["output"]), sample_period), id);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Models: {A, B, C, D, dt}

inline json model_to_json(const StateSpace& ss) {
    json a = json::array();
    for (Eigen::Index i = 0; i < ss.A.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < ss.A.cols(); ++j) row.push_back(ss.A(i, j));
        a.push_back(std::move(row));
    }
    json b = json::array(), c = json::array();
    for (Eigen::Index i = 0; i < ss.B.size(); ++i) b.push_back(ss.B(i));
    for (Eigen::Index i = 0; i < ss.C.size(); ++i) c.push_back(ss.C(i));
    return {{"A", a}, {"B", b}, {"C", c}, {"D", ss.D}, {"dt", ss.sample_period}};
}

inline StateSpace model_from_json(const json& j) {
    try {
        const auto& a = j.at("A");
        const auto n = static_cast<Eigen::Index>(a.size());
        Matrix A(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& row = a.at(static_cast<std::size_t>(i));
            if (static_cast<Eigen::Index>(row.size()) != n) throw ParseError("model A is not square");
            for (Eigen::Index k = 0; k < n; ++k) A(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
        }
        const auto bv = j.at("B").get<std::vector<double>>();
        const auto cv = j.at("C").get<std::vector<double>>();
        Vector B = Eigen::Map<const Vector>(bv.data(), static_cast<Eigen::Index>(bv.size()));
        RowVector C = Eigen::Map<const RowVector>(cv.data(), static_cast<Eigen::Index>(cv.size()));
        return StateSpace(std::move(A), std::move(B), std::move(C), j.at("D").get<double>(),
                          j.value("dt", 1.0));
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model json: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Dataset manifest

struct Manifest {
    std::vector<int> labels;  // indexed by pair_id
    double sample_period = 1.0;
    std::uint64_t seed = 0;
    json generator_config = json::object();
};

inline json components_to_json(const CircuitComponents& c) {
    return {{"R", c.R}, {"L1", c.L1}, {"L2", c.L2}, {"C", c.C}};
}

inline CircuitComponents components_from_json(const json& j) {
    return {j.at("R").get<double>(), j.at("L1").get<double>(), j.at("L2").get<double>(), j.at("C").get<double>()};
}

/// Generator settings of a circuit dataset; enough to rebuild its systems.
inline json circuit_generator_config(const InputCounts& counts, std::size_t length, double dt,
                                     Discretization method) {
    return {{"systems", "paper-circuits"},
            {"circuits", json::array({components_to_json(kCircuitS1), components_to_json(kCircuitS2)})},
            {"discretization", std::string(to_string(method))},
            {"length", length},
            {"counts", {{"lti", counts.lti}, {"multisine", counts.multisine}, {"white_noise", counts.white_noise}}},
            {"input_filter_order", kInputFilterOrder},
            {"input_pole_radius", kInputPoleRadius},
            {"multisine_noise_std", kDefaultMultisineNoiseStd}};
}

inline json manifest_to_json(const Manifest& m, const std::vector<InputKind>& kinds = {}) {
    json pairs = json::array();
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        json p = {{"pair_id", i}, {"label", m.labels[i]}};
        if (i < kinds.size()) p["input_kind"] = std::string(to_string(kinds[i]));
        pairs.push_back(std::move(p));
    }
    return {{"pairs", pairs},
            {"sample_period", m.sample_period},
            {"seed", m.seed},
            {"generator_config", m.generator_config}};
}

inline Manifest manifest_from_json(const json& j) {
    try {
        Manifest m;
        m.sample_period = j.at("sample_period").get<double>();
        m.seed = j.value("seed", std::uint64_t{0});
        m.generator_config = j.value("generator_config", json::object());
        const auto& pairs = j.at("pairs");
        m.labels.assign(pairs.size(), -1);
        for (const auto& p : pairs) {
            const auto id = p.at("pair_id").get<std::size_t>();
            if (id >= m.labels.size()) throw ParseError("manifest pair_id " + std::to_string(id) + " out of range");
            m.labels[id] = p.at("label").get<int>();
        }
        for (std::size_t i = 0; i < m.labels.size(); ++i) {
            if (m.labels[i] < 0) throw ParseError("manifest has no label for pair " + std::to_string(i));
        }
        return m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed manifest: ") + e.what());
    }
}

/// Rebuilds the generating systems recorded in a circuit manifest, if any.
inline std::vector<StateSpace> systems_from_manifest(const Manifest& m) {
    const auto& g = m.generator_config;
    if (!g.contains("circuits")) return {};
    const Discretization method = parse_discretization(g.value("discretization", std::string("bilinear")));
    std::vector<StateSpace> out;
    for (const auto& c : g.at("circuits")) out.push_back(discrete_circuit(components_from_json(c), m.sample_period, method));
    return out;
}

inline const char* kSeriesFile = "series.csv";
inline const char* kManifestFile = "manifest.json";

/// Writes <dir>/series.csv (or series.csv.gz) and <dir>/manifest.json.
inline void save_dataset(const std::filesystem::path& dir, const LabeledDataset& ds, const Manifest& manifest,
                         bool gzip = false) {
    write_text(dir / (std::string(kSeriesFile) + (gzip ? ".gz" : "")), series_csv(ds.pairs));
    write_text(dir / kManifestFile, manifest_to_json(manifest, ds.input_kinds).dump(2) + "\n");
}

inline LabeledDataset load_dataset(const std::filesystem::path& dir) {
    const Manifest m = [&] {
        try {
            return manifest_from_json(json::parse(read_text(dir / kManifestFile)));
        } catch (const json::parse_error& e) {
            throw ParseError((dir / kManifestFile).string() + ": " + e.what());
        }
    }();
    std::filesystem::path series = dir / kSeriesFile;
    if (!std::filesystem::exists(series) && std::filesystem::exists(dir / (std::string(kSeriesFile) + ".gz"))) {
        series = dir / (std::string(kSeriesFile) + ".gz");
    }
    LabeledDataset ds;
    ds.pairs = parse_series_csv(read_text(series), m.sample_period, series.string());
    if (ds.pairs.size() != m.labels.size()) {
        throw ValidationError("manifest lists " + std::to_string(m.labels.size()) + " pairs but " + series.string() +
                              " holds " + std::to_string(ds.pairs.size()));
    }
    for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
        if (ds.pairs[i].pair_id != i) throw ValidationError("pair ids are not contiguous from 0");
    }
    ds.ground_truth = m.labels;
    ds.systems = systems_from_manifest(m);
    return ds;
}

// ---------------------------------------------------------------------------
// Distance matrix CSV: n rows of n values, no header

inline std::string matrix_csv(const DistanceMatrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

inline DistanceMatrix parse_matrix_csv(std::string_view text, const std::string& source = "matrix csv") {
    std::vector<std::vector<double>> rows;
    std::size_t row = 0;
    for (const auto& [number, line] : lines_of(text)) {
        ++row;
        const std::string where = source + " row " + std::to_string(row) + " (line " + std::to_string(number) + ")";
        std::vector<double> values;
        for (auto f : split(line)) values.push_back(parse_double(f, where));
        if (!rows.empty() && values.size() != rows.front().size()) {
            throw ParseError(where + ": expected " + std::to_string(rows.front().size()) + " values, got " +
                             std::to_string(values.size()));
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw ParseError(source + ": empty matrix");
    return DistanceMatrix::from_rows(rows);
}

// ---------------------------------------------------------------------------
// Partition CSV: pair_id,label

inline std::string partition_csv(const Partition& p) {
    std::string out = "pair_id,label\n";
    for (std::size_t i = 0; i < p.size(); ++i) out += std::to_string(i) + "," + std::to_string(p[i]) + "\n";
    return out;
}

inline Partition parse_partition_csv(std::string_view text, const std::string& source = "partition csv") {
    const auto lines = lines_of(text);
    if (lines.empty() || split(lines.front().second) != std::vector<std::string_view>{"pair_id", "label"}) {
        throw ParseError(source + ": expected header 'pair_id,label'");
    }
    std::vector<int> labels;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string where = source + " line " + std::to_string(lines[i].first);
        const auto f = split(lines[i].second);
        if (f.size() != 2) throw ParseError(where + ": expected 2 fields");
        if (parse_integer(f[0], where) != static_cast<long long>(labels.size())) {
            throw ParseError(where + ": pair ids must run 0..n-1 in order");
        }
        labels.push_back(static_cast<int>(parse_integer(f[1], where)));
    }
    int k = 0;
    for (int l : labels) k = std::max(k, l + 1);
    return Partition(std::move(labels), static_cast<std::size_t>(k));
}

// ---------------------------------------------------------------------------
// Cepstra CSV: pair_id,k,c_y,c_u

inline std::string cepstra_csv(const std::vector<IOPair>& pairs, const WelchConfig& cfg) {
    std::string out = "pair_id,k,c_y,c_u\n";
    for (const auto& p : pairs) {
        const Cepstrum cy = power_cepstrum(p.output, cfg);
        const Cepstrum cu = power_cepstrum(p.input, cfg);
        for (std::size_t k = 0; k < cy.size(); ++k) {
            out += std::to_string(p.pair_id) + "," + std::to_string(k) + "," + format_double(cy[k]) + "," +
                   format_double(cu[k]) + "\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Experiment reports

inline json welch_to_json(const WelchConfig& w, bool auto_segment) {
    json j = {{"overlap_fraction", w.overlap_fraction},
              {"window", std::string(to_string(w.window))},
              {"psd_floor_ratio", w.psd_floor_ratio},
              {"prewhiten_order", w.prewhiten_order}};
    if (auto_segment) {
        j["segment_length"] = "auto: min(256, largest power of two <= N/4)";
    } else {
        j["segment_length"] = w.segment_length;
    }
    return j;
}

inline json config_to_json(const ExperimentConfig& c) {
    json measures = json::array();
    for (Measure m : c.measures) measures.push_back(std::string(to_string(m)));
    return {{"series_lengths", c.series_lengths},
            {"repetitions", c.repetitions},
            {"pairs_per_system",
             {{"lti", c.counts.lti}, {"multisine", c.counts.multisine}, {"white_noise", c.counts.white_noise}}},
            {"measures", measures},
            {"welch", welch_to_json(c.welch, c.auto_segment)},
            {"dtw", {{"band_radius_fraction", c.dtw.band_radius_fraction}}},
            {"hinf_grid", c.hinf_grid},
            {"linkage", std::string(to_string(c.linkage))},
            {"sample_period", c.sample_period},
            {"discretization", std::string(to_string(c.discretization))},
            {"master_seed", c.master_seed},
            {"threads", c.threads}};
}

inline json report_to_json(const ExperimentReport& r) {
    json cells = json::array();
    for (const auto& c : r.cells) {
        json failures = json::array();
        for (const auto& run : c.runs) {
            if (!run.ok) failures.push_back({{"repetition", run.repetition}, {"error", run.error}});
        }
        json cell = {{"measure", std::string(to_string(c.measure))},
                     {"length", c.length},
                     {"ari_mean", c.ari_mean},
                     {"ari_std", c.ari_std},
                     {"seconds_mean", c.seconds_mean},
                     {"seconds_std", c.seconds_std},
                     {"completed", c.completed()},
                     {"failed", c.failed()},
                     {"failures", failures}};
        if (is_model_norm(c.measure)) cell["label"] = "model-norm (known models)";
        cells.push_back(std::move(cell));
    }
    return {{"config", config_to_json(r.config)},
            {"cells", cells},
            {"metadata",
             {{"timestamp", r.timestamp},
              {"notes", r.notes},
              {"compiler", __VERSION__},
              {"cplusplus", __cplusplus},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)}}}};
}

/// Long format: one row per (measure, length, repetition); failed runs have
/// empty ari and seconds.
inline std::string report_csv(const ExperimentReport& r) {
    std::string out = "measure,length,repetition,ari,seconds\n";
    for (const auto& c : r.cells) {
        for (const auto& run : c.runs) {
            out += std::string(to_string(c.measure)) + "," + std::to_string(c.length) + "," +
                   std::to_string(run.repetition) + ",";
            if (run.ok) out += format_double(run.ari) + "," + format_double(run.seconds);
            else out += ",";
            out += "\n";
        }
    }
    return out;
}

}  // namespace cepclust::io
