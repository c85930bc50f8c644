#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cepclust/cepclust.hpp"
#include "cepclust/io.hpp"

namespace cepclust::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kAcceptanceFailure = 3 };

struct GlobalOptions {
    std::uint64_t seed = 1;
    double sample_period = kDefaultCircuitSamplePeriod;
    std::string discretization = std::string(to_string(kDefaultCircuitDiscretization));
    std::size_t welch_segment = 0;  // 0: min(256, N/4)
    double welch_overlap = 0.5;
    std::string window = "hann";
    std::size_t prewhiten_order = WelchConfig{}.prewhiten_order;
    double dtw_band = 0.1;
    std::string linkage = "average";
    std::size_t threads = 1;
    std::string output;
    std::string format = "csv";

    WelchConfig welch_for(std::size_t n) const {
        WelchConfig w;
        w.segment_length = welch_segment ? welch_segment : default_segment_length(n);
        w.overlap_fraction = welch_overlap;
        w.window = parse_window(window);
        w.prewhiten_order = prewhiten_order;
        return w;
    }

    DtwConfig dtw() const { return DtwConfig{dtw_band}; }
    Discretization method() const { return parse_discretization(discretization); }
};

/// "10,5,5" -> {10, 5, 5}
inline InputCounts parse_counts(const std::string& text) {
    const auto f = io::split(text);
    if (f.size() != 3) throw ConfigError("--counts needs three values lti,multisine,noise, got '" + text + "'");
    auto v = [&](std::size_t i) {
        const long long x = io::parse_integer(f[i], "--counts");
        if (x < 0) throw ConfigError("--counts values must be >= 0");
        return static_cast<std::size_t>(x);
    };
    return {v(0), v(1), v(2)};
}

inline std::vector<Measure> parse_measure_list(const std::string& text) {
    std::vector<Measure> out;
    for (auto name : io::split(text)) out.push_back(parse_measure(name));
    if (out.empty()) throw ConfigError("empty measure list");
    return out;
}

inline std::vector<std::size_t> parse_length_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (auto f : io::split(text)) {
        const long long n = io::parse_integer(f, "--lengths");
        if (n < 2) throw ConfigError("series lengths must be >= 2");
        out.push_back(static_cast<std::size_t>(n));
    }
    return out;
}

/// Shortest series length in a dataset; drives the automatic Welch segment.
inline std::size_t shortest_series(const LabeledDataset& ds) {
    std::size_t n = ds.pairs.empty() ? 0 : ds.pairs.front().input.size();
    for (const auto& p : ds.pairs) n = std::min(n, p.input.size());
    return n;
}

/// Applies the keys present in a JSON object onto `cfg`.
inline void apply_config_json(ExperimentConfig& cfg, const io::json& j) {
    try {
        if (j.contains("series_lengths")) cfg.series_lengths = j.at("series_lengths").get<std::vector<std::size_t>>();
        if (j.contains("repetitions")) cfg.repetitions = j.at("repetitions").get<std::size_t>();
        if (j.contains("pairs_per_system")) {
            const auto& c = j.at("pairs_per_system");
            cfg.counts = {c.value("lti", std::size_t{0}), c.value("multisine", std::size_t{0}),
                          c.value("white_noise", std::size_t{0})};
        }
        if (j.contains("measures")) {
            cfg.measures.clear();
            for (const auto& m : j.at("measures")) cfg.measures.push_back(parse_measure(m.get<std::string>()));
        }
        if (j.contains("welch")) {
            const auto& w = j.at("welch");
            if (w.contains("segment_length") && w.at("segment_length").is_number_unsigned()) {
                cfg.welch.segment_length = w.at("segment_length").get<std::size_t>();
                cfg.auto_segment = false;
            }
            cfg.welch.overlap_fraction = w.value("overlap_fraction", cfg.welch.overlap_fraction);
            if (w.contains("window")) cfg.welch.window = parse_window(w.at("window").get<std::string>());
            cfg.welch.psd_floor_ratio = w.value("psd_floor_ratio", cfg.welch.psd_floor_ratio);
            cfg.welch.prewhiten_order = w.value("prewhiten_order", cfg.welch.prewhiten_order);
        }
        if (j.contains("dtw")) cfg.dtw.band_radius_fraction = j.at("dtw").value("band_radius_fraction", 0.1);
        if (j.contains("hinf_grid")) cfg.hinf_grid = j.at("hinf_grid").get<std::size_t>();
        if (j.contains("linkage")) cfg.linkage = parse_linkage(j.at("linkage").get<std::string>());
        if (j.contains("sample_period")) cfg.sample_period = j.at("sample_period").get<double>();
        if (j.contains("discretization")) {
            cfg.discretization = parse_discretization(j.at("discretization").get<std::string>());
        }
        if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<std::size_t>();
    } catch (const io::json::exception& e) {
        throw ConfigError(std::string("malformed benchmark config: ") + e.what());
    }
}

inline void emit(const GlobalOptions& g, std::ostream& out, const std::string& text) {
    if (g.output.empty()) {
        out << text;
    } else {
        io::write_text(g.output, text);
    }
}

// ---------------------------------------------------------------------------
// Subcommands

struct GenerateArgs {
    std::string systems = "paper-circuits";
    std::string counts = "10,5,5";
    std::size_t length = 1024;
    bool gzip = false;
};

inline int cmd_generate(const GlobalOptions& g, const GenerateArgs& a, std::ostream& out) {
    if (g.output.empty()) throw ConfigError("generate needs --output <directory>");
    if (g.welch_segment) g.welch_for(a.length).validate_for(a.length);
    const InputCounts counts = parse_counts(a.counts);
    const auto systems = paper_circuits(g.sample_period, g.method());
    const LabeledDataset ds = build_paper_dataset(a.length, counts, systems, g.seed);

    io::Manifest m;
    m.labels = ds.ground_truth;
    m.sample_period = g.sample_period;
    m.seed = g.seed;
    m.generator_config = io::circuit_generator_config(counts, a.length, g.sample_period, g.method());
    io::save_dataset(g.output, ds, m, a.gzip);

    out << "wrote " << ds.size() << " pairs of length " << a.length << " (" << counts.total()
        << " per system, " << systems.size() << " systems) to " << g.output << "\n";
    return kOk;
}

struct DistanceArgs {
    std::string dataset;
    std::string measure = "extended-cepstral";
    std::vector<std::size_t> pair;
};

inline int cmd_distance(const GlobalOptions& g, const DistanceArgs& a, std::ostream& out) {
    const LabeledDataset ds = io::load_dataset(a.dataset);
    const Measure measure = parse_measure(a.measure);
    const MeasureConfig mcfg{g.welch_for(shortest_series(ds)), g.dtw(), kDefaultHinfGrid};
    if (!a.pair.empty()) {
        const std::size_t i = a.pair[0], j = a.pair[1];
        if (i >= ds.size() || j >= ds.size()) {
            throw ParameterError("--pair index out of range for " + std::to_string(ds.size()) + " pairs");
        }
        double d;
        try {
            d = DatasetDistance(ds, measure, mcfg, g.threads)(i, j);
        } catch (const MeasureError&) {
            throw;
        } catch (const std::exception& e) {
            throw MeasureError(i, j, e.what());
        }
        emit(g, out, io::format_double(d) + "\n");
        return kOk;
    }
    const DistanceMatrix m = pairwise_matrix(ds, measure, mcfg, g.threads);
    if (g.format == "json") {
        io::json rows = io::json::array();
        for (std::size_t i = 0; i < m.size(); ++i) {
            io::json row = io::json::array();
            for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
            rows.push_back(std::move(row));
        }
        emit(g, out, io::json{{"measure", a.measure}, {"matrix", rows}}.dump() + "\n");
    } else {
        emit(g, out, io::matrix_csv(m));
    }
    return kOk;
}

struct ClusterArgs {
    std::string matrix;
    std::size_t k = 2;
    std::string manifest;
};

inline int cmd_cluster(const GlobalOptions& g, const ClusterArgs& a, std::ostream& out) {
    const DistanceMatrix m = io::parse_matrix_csv(io::read_text(a.matrix), a.matrix);
    const Partition p = cut(hierarchical_cluster(m, parse_linkage(g.linkage)), a.k);
    std::optional<double> ari;
    if (!a.manifest.empty()) {
        const io::Manifest man = io::manifest_from_json(io::json::parse(io::read_text(a.manifest)));
        if (man.labels.size() != p.size()) {
            throw ValidationError("manifest lists " + std::to_string(man.labels.size()) + " pairs, matrix has " +
                                  std::to_string(p.size()));
        }
        ari = adjusted_rand_index(p.labels(), man.labels);
    }
    if (g.format == "json") {
        io::json j = {{"labels", p.labels()}, {"k", a.k}};
        if (ari) j["ari"] = *ari;
        emit(g, out, j.dump() + "\n");
    } else {
        emit(g, out, io::partition_csv(p));
        if (ari) out << "ARI " << io::format_double(*ari) << "\n";
    }
    return kOk;
}

struct BenchmarkArgs {
    std::string preset = "desk";
    std::string config;
    std::string measures;
    std::string lengths;
    std::size_t repetitions = 0;
    bool check = false;
};

inline ExperimentConfig benchmark_config(const GlobalOptions& g, const BenchmarkArgs& a) {
    ExperimentConfig cfg = a.preset == "paper" ? paper_preset() : desk_preset();
    cfg.master_seed = g.seed;
    cfg.sample_period = g.sample_period;
    cfg.discretization = g.method();
    cfg.welch.overlap_fraction = g.welch_overlap;
    cfg.welch.window = parse_window(g.window);
    cfg.welch.prewhiten_order = g.prewhiten_order;
    if (g.welch_segment) {
        cfg.welch.segment_length = g.welch_segment;
        cfg.auto_segment = false;
    }
    cfg.dtw.band_radius_fraction = g.dtw_band;
    cfg.linkage = parse_linkage(g.linkage);
    cfg.threads = g.threads;
    if (!a.config.empty()) apply_config_json(cfg, io::json::parse(io::read_text(a.config)));
    if (!a.measures.empty()) cfg.measures = parse_measure_list(a.measures);
    if (!a.lengths.empty()) cfg.series_lengths = parse_length_list(a.lengths);
    if (a.repetitions) cfg.repetitions = a.repetitions;
    return cfg;
}

inline std::string summary_table(const ExperimentReport& r) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-18s %7s %10s %10s %11s %11s %s\n", "measure", "length", "ari_mean", "ari_std",
                  "sec_mean", "sec_std", "failed");
    out += line;
    for (const auto& c : r.cells) {
        std::snprintf(line, sizeof line, "%-18s %7zu %10.6f %10.6f %11.3e %11.3e %zu\n",
                      std::string(to_string(c.measure)).c_str(), c.length, c.ari_mean, c.ari_std, c.seconds_mean,
                      c.seconds_std, c.runs.size() - c.completed());
        out += line;
    }
    return out;
}

inline int cmd_benchmark(const GlobalOptions& g, const BenchmarkArgs& a, std::ostream& out) {
    const ExperimentConfig cfg = benchmark_config(g, a);
    const ExperimentReport report = run_experiment(cfg);
    if (!g.output.empty()) {
        io::write_text(g.output + ".json", io::report_to_json(report).dump(2) + "\n");
        io::write_text(g.output + ".csv", io::report_csv(report));
    }
    if (g.format == "json") {
        out << io::report_to_json(report).dump(2) << "\n";
    } else {
        out << summary_table(report);
    }
    for (const auto& c : report.cells) {
        for (const auto& run : c.runs) {
            if (!run.ok) {
                out << "failed: " << to_string(c.measure) << " @ " << c.length << " rep " << run.repetition << ": "
                    << run.error << "\n";
            }
        }
    }
    if (!a.check) return kOk;
    const auto checks = check_report(report);
    for (const auto& c : checks) out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    return all_passed(checks) ? kOk : kAcceptanceFailure;
}

struct SimulateArgs {
    std::string model;
    std::string circuit;
    std::string input;
    std::string write_model;
};

inline int cmd_simulate(const GlobalOptions& g, const SimulateArgs& a, std::ostream& out) {
    if (a.model.empty() == a.circuit.empty()) throw ConfigError("simulate needs exactly one of --model or --circuit");
    StateSpace ss;
    if (!a.model.empty()) {
        ss = io::model_from_json(io::json::parse(io::read_text(a.model)));
    } else if (a.circuit == "s1" || a.circuit == "S1") {
        ss = discrete_circuit(kCircuitS1, g.sample_period, g.method());
    } else if (a.circuit == "s2" || a.circuit == "S2") {
        ss = discrete_circuit(kCircuitS2, g.sample_period, g.method());
    } else {
        throw ConfigError("unknown circuit '" + a.circuit + "' (expected s1 or s2)");
    }
    if (!a.write_model.empty()) io::write_text(a.write_model, io::model_to_json(ss).dump(2) + "\n");
    if (a.input.empty()) {
        if (a.write_model.empty()) throw ConfigError("simulate needs --input (or --write-model)");
        return kOk;
    }
    std::vector<IOPair> pairs;
    for (auto& [id, roles] : io::parse_series_table(io::read_text(a.input), a.input)) {
        auto it = roles.find("input");
        if (it == roles.end()) throw ParseError(a.input + ": pair " + std::to_string(id) + " has no input series");
        TimeSeries u(std::move(it->second), ss.sample_period);
        TimeSeries y = simulate(ss, u);
        pairs.emplace_back(std::move(u), std::move(y), id);
    }
    emit(g, out, io::series_csv(pairs));
    return kOk;
}

struct CepstrumArgs {
    std::string dataset;
};

inline int cmd_cepstrum(const GlobalOptions& g, const CepstrumArgs& a, std::ostream& out) {
    const LabeledDataset ds = io::load_dataset(a.dataset);
    emit(g, out, io::cepstra_csv(ds.pairs, g.welch_for(shortest_series(ds))));
    return kOk;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Cluster input/output time series by the dynamics of their generating systems."};
    app.name("cepclust");
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
    app.add_option("--sample-period", g.sample_period, "Circuit sample period in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--discretization", g.discretization, "Circuit discretization")
        ->check(CLI::IsMember({"zoh", "bilinear"}))
        ->capture_default_str();
    app.add_option("--welch-segment", g.welch_segment, "Welch segment length; 0 picks min(256, N/4)")
        ->capture_default_str();
    app.add_option("--welch-overlap", g.welch_overlap, "Welch overlap fraction in [0, 1)")->capture_default_str();
    app.add_option("--window", g.window, "Welch window")
        ->check(CLI::IsMember({"hann", "hamming", "rectangular"}))
        ->capture_default_str();
    app.add_option("--prewhiten-order", g.prewhiten_order,
                   "AR order of the input whitening filter for the extended cepstral distance; 0 disables")
        ->capture_default_str();
    app.add_option("--dtw-band", g.dtw_band, "Sakoe-Chiba radius as a fraction of the length")->capture_default_str();
    app.add_option("--linkage", g.linkage, "Hierarchical linkage")
        ->check(CLI::IsMember({"average", "complete", "single"}))
        ->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--output", g.output, "Output path (directory for generate, prefix for benchmark)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    GenerateArgs gen_args;
    auto* gen = app.add_subcommand("generate", "Simulate the two circuits on random inputs and write the dataset");
    gen->add_option("--systems", gen_args.systems, "System family")
        ->check(CLI::IsMember({"paper-circuits"}))
        ->capture_default_str();
    gen->add_option("--counts", gen_args.counts, "Inputs per system: lti,multisine,noise")->capture_default_str();
    gen->add_option("--length", gen_args.length, "Samples per series")->check(CLI::Range(2, 1 << 26))->capture_default_str();
    gen->add_flag("--gzip", gen_args.gzip, "Write series.csv.gz");

    DistanceArgs dist_args;
    auto* dist = app.add_subcommand("distance", "Distance matrix (or one entry) over a dataset");
    dist->add_option("--dataset", dist_args.dataset, "Dataset directory")->required();
    dist->add_option("--measure", dist_args.measure, "Distance measure")
        ->check(CLI::IsMember({"euclidean", "dtw", "keogh-lb", "cepstral", "extended-cepstral", "h2", "hinf"}))
        ->capture_default_str();
    dist->add_option("--pair", dist_args.pair, "Print the distance between pairs i and j")->expected(2);

    ClusterArgs clu_args;
    auto* clu = app.add_subcommand("cluster", "Hierarchical clustering of a distance matrix CSV");
    clu->add_option("--matrix", clu_args.matrix, "Distance matrix CSV")->required();
    clu->add_option("-k,--clusters", clu_args.k, "Number of clusters")->capture_default_str();
    clu->add_option("--manifest", clu_args.manifest, "Dataset manifest; prints the ARI against its labels");

    BenchmarkArgs bench_args;
    auto* bench = app.add_subcommand("benchmark", "ARI and timing sweep over lengths and repetitions");
    bench->add_option("--preset", bench_args.preset, "desk: 40 pairs, 2^8..2^12, 10 reps; paper: 400 pairs, "
                                                     "2^6..2^16, 100 reps")
        ->check(CLI::IsMember({"desk", "paper"}))
        ->capture_default_str();
    bench->add_option("--config", bench_args.config, "JSON file overriding preset fields");
    bench->add_option("--measures", bench_args.measures, "Comma-separated measures");
    bench->add_option("--lengths", bench_args.lengths, "Comma-separated series lengths");
    bench->add_option("--reps", bench_args.repetitions, "Repetitions");
    bench->add_flag("--check", bench_args.check, "Exit 3 if a clustering-quality bound fails");

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Run a discrete model on the input series of a CSV");
    sim->add_option("--model", sim_args.model, "Model JSON {A, B, C, D, dt}");
    sim->add_option("--circuit", sim_args.circuit, "Built-in circuit s1 or s2 (uses --sample-period)");
    sim->add_option("--input", sim_args.input, "Series CSV; rows with role=input are simulated");
    sim->add_option("--write-model", sim_args.write_model, "Also write the model JSON here");

    CepstrumArgs cep_args;
    auto* cep = app.add_subcommand("cepstrum", "Output and input power cepstra of every pair");
    cep->add_option("--dataset", cep_args.dataset, "Dataset directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) return cmd_generate(g, gen_args, out);
        if (*dist) return cmd_distance(g, dist_args, out);
        if (*clu) return cmd_cluster(g, clu_args, out);
        if (*bench) return cmd_benchmark(g, bench_args, out);
        if (*sim) return cmd_simulate(g, sim_args, out);
        if (*cep) return cmd_cepstrum(g, cep_args, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kUsage;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"cepclust"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cepclust::cli
