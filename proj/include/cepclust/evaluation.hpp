#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cepclust/clustering.hpp"
#include "cepclust/dataset.hpp"
#include "cepclust/errors.hpp"
#include "cepclust/measures.hpp"
#include "cepclust/rng.hpp"

namespace cepclust {

// ---------------------------------------------------------------------------
// Adjusted Rand Index

namespace detail {
inline double choose2(double x) { return 0.5 * x * (x - 1.0); }
}  // namespace detail

/// Hubert-Arabie ARI. When the expected and maximal index coincide (both
/// partitions trivial) the result is 1 for identical partitions, else 0.
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) {
        throw ParameterError("ARI needs partitions of equal length, got " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()));
    }
    if (a.size() < 2) throw ParameterError("ARI needs at least 2 elements");
    std::map<std::pair<int, int>, double> table;
    std::map<int, double> rows, cols;
    for (std::size_t i = 0; i < a.size(); ++i) {
        table[{a[i], b[i]}] += 1.0;
        rows[a[i]] += 1.0;
        cols[b[i]] += 1.0;
    }
    double index = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [_, c] : table) index += detail::choose2(c);
    for (const auto& [_, c] : rows) sum_a += detail::choose2(c);
    for (const auto& [_, c] : cols) sum_b += detail::choose2(c);
    const double expected = sum_a * sum_b / detail::choose2(static_cast<double>(a.size()));
    const double max_index = 0.5 * (sum_a + sum_b);
    const double denom = max_index - expected;
    if (denom == 0.0) {
        // relabelings of one another give a bijective table
        const bool same = table.size() == rows.size() && table.size() == cols.size();
        return same ? 1.0 : 0.0;
    }
    return (index - expected) / denom;
}

inline double adjusted_rand_index(const Partition& p1, const Partition& p2) {
    return adjusted_rand_index(p1.labels(), p2.labels());
}

// ---------------------------------------------------------------------------
// Experiment harness

struct ExperimentConfig {
    std::vector<std::size_t> series_lengths;
    std::size_t repetitions = 10;
    InputCounts counts = kDeskCounts;
    std::vector<Measure> measures;
    /// segment_length is ignored while auto_segment is set; each length then
    /// uses default_segment_length(n).
    WelchConfig welch;
    bool auto_segment = true;
    DtwConfig dtw;
    std::size_t hinf_grid = kDefaultHinfGrid;
    Linkage linkage = Linkage::average;
    double sample_period = kDefaultCircuitSamplePeriod;
    Discretization discretization = kDefaultCircuitDiscretization;
    std::uint64_t master_seed = 1;
    std::size_t threads = 1;

    WelchConfig welch_for(std::size_t n) const {
        WelchConfig w = welch;
        if (auto_segment) w.segment_length = default_segment_length(n);
        return w;
    }

    MeasureConfig measure_config(std::size_t n) const { return {welch_for(n), dtw, hinf_grid}; }

    /// Dataset seed of one repetition; shared by every length and measure.
    std::uint64_t repetition_seed(std::size_t rep) const { return derive_seed(master_seed, rep); }

    void validate() const {
        if (series_lengths.empty()) throw ConfigError("experiment needs at least one series length");
        if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
        if (measures.empty()) throw ConfigError("experiment needs at least one measure");
        if (counts.total() == 0) throw ConfigError("experiment needs at least one input per system");
        if (threads < 1) throw ConfigError("threads must be >= 1");
        dtw.validate();
        for (std::size_t n : series_lengths) {
            if (!is_power_of_two(n)) throw ConfigError("series length " + std::to_string(n) + " is not a power of two");
            const WelchConfig w = welch_for(n);
            w.validate();
            if (n < 2 * w.segment_length) {
                throw ConfigError("series length " + std::to_string(n) + " is below twice the welch segment length " +
                                  std::to_string(w.segment_length));
            }
        }
    }
};

inline std::vector<std::size_t> powers_of_two(int lo_exp, int hi_exp, int step = 1) {
    std::vector<std::size_t> out;
    for (int e = lo_exp; e <= hi_exp; e += step) out.push_back(std::size_t{1} << e);
    return out;
}

/// Acceptance scale: 40 pairs, 2^8..2^12, 10 repetitions.
inline ExperimentConfig desk_preset() {
    ExperimentConfig cfg;
    cfg.series_lengths = powers_of_two(8, 12, 2);
    cfg.repetitions = 10;
    cfg.counts = kDeskCounts;
    cfg.measures = {Measure::euclidean, Measure::keogh_lb, Measure::cepstral,
                    Measure::extended_cepstral, Measure::h2, Measure::hinf};
    return cfg;
}

/// The published setup: 400 pairs, 2^6..2^16, 100 repetitions.
inline ExperimentConfig paper_preset() {
    ExperimentConfig cfg = desk_preset();
    cfg.series_lengths = powers_of_two(6, 16, 2);
    cfg.repetitions = 100;
    cfg.counts = kPaperCounts;
    return cfg;
}

struct RepetitionResult {
    std::size_t repetition = 0;
    bool ok = false;
    double ari = 0.0;
    double seconds = 0.0;
    std::string error;
};

struct CellSummary {
    Measure measure{};
    std::size_t length = 0;
    std::vector<RepetitionResult> runs;
    double ari_mean = 0.0;
    double ari_std = 0.0;
    double seconds_mean = 0.0;
    double seconds_std = 0.0;

    std::size_t completed() const {
        return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const auto& r) { return r.ok; }));
    }
    bool failed() const { return completed() != runs.size(); }
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<CellSummary> cells;
    std::string timestamp;
    std::vector<std::string> notes;

    const CellSummary& cell(Measure m, std::size_t length) const {
        for (const auto& c : cells) {
            if (c.measure == m && c.length == length) return c;
        }
        throw ParameterError("report has no cell for " + std::string(to_string(m)) + " at length " +
                             std::to_string(length));
    }

    bool has_cell(Measure m, std::size_t length) const {
        return std::any_of(cells.begin(), cells.end(),
                           [&](const auto& c) { return c.measure == m && c.length == length; });
    }
};

/// Mean and sample standard deviation (n - 1); std is 0 for fewer than 2 values.
inline std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

inline void summarize(CellSummary& cell) {
    std::vector<double> aris, secs;
    for (const auto& r : cell.runs) {
        if (!r.ok) continue;
        aris.push_back(r.ari);
        secs.push_back(r.seconds);
    }
    std::tie(cell.ari_mean, cell.ari_std) = mean_std(aris);
    std::tie(cell.seconds_mean, cell.seconds_std) = mean_std(secs);
}

/// Times feature extraction + distance matrix + clustering for one measure on
/// one dataset and scores the cut against the ground truth.
inline RepetitionResult run_measure(const LabeledDataset& ds, Measure measure, const MeasureConfig& mcfg,
                                    Linkage linkage, std::size_t threads) {
    RepetitionResult r;
    try {
        using clock = std::chrono::steady_clock;
        const auto t0 = clock::now();
        const DistanceMatrix m = pairwise_matrix(ds, measure, mcfg, threads);
        const Partition p = cut(hierarchical_cluster(m, linkage), ds.distinct_labels());
        r.seconds = std::chrono::duration<double>(clock::now() - t0).count();
        r.ari = adjusted_rand_index(p.labels(), ds.ground_truth);
        r.ok = true;
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;
    report.config = cfg;
    report.timestamp = utc_timestamp();
    report.notes = {
        "timing covers feature extraction, distance matrix and clustering; dataset generation is excluded",
        "h2 and hinf are model-norm (known models): distances between the ground-truth generating systems, "
        "no identification step",
        "std columns are sample standard deviations over repetitions",
    };
    const auto systems = paper_circuits(cfg.sample_period, cfg.discretization);

    for (std::size_t n : cfg.series_lengths) {
        for (Measure m : cfg.measures) {
            CellSummary cell;
            cell.measure = m;
            cell.length = n;
            report.cells.push_back(std::move(cell));
        }
    }
    for (std::size_t li = 0; li < cfg.series_lengths.size(); ++li) {
        const std::size_t n = cfg.series_lengths[li];
        const MeasureConfig mcfg = cfg.measure_config(n);
        for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
            std::string gen_error;
            LabeledDataset ds;
            try {
                ds = build_paper_dataset(n, cfg.counts, systems, cfg.repetition_seed(rep));
            } catch (const std::exception& e) {
                gen_error = std::string("dataset generation: ") + e.what();
            }
            for (std::size_t mi = 0; mi < cfg.measures.size(); ++mi) {
                auto& cell = report.cells[li * cfg.measures.size() + mi];
                RepetitionResult r;
                if (gen_error.empty()) {
                    r = run_measure(ds, cfg.measures[mi], mcfg, cfg.linkage, cfg.threads);
                } else {
                    r.error = gen_error;
                }
                r.repetition = rep;
                cell.runs.push_back(std::move(r));
            }
        }
    }
    for (auto& cell : report.cells) summarize(cell);
    return report;
}

/// Consecutive ratios t(2n) / t(n) of a measure's mean seconds over the
/// report's lengths in increasing order.
inline std::vector<double> timing_scaling_check(const ExperimentReport& report, Measure measure) {
    std::vector<std::size_t> lengths;
    for (const auto& c : report.cells) {
        if (c.measure == measure) lengths.push_back(c.length);
    }
    std::sort(lengths.begin(), lengths.end());
    if (lengths.size() < 3) {
        throw ParameterError("scaling check needs >= 3 lengths for " + std::string(to_string(measure)) + ", got " +
                             std::to_string(lengths.size()));
    }
    std::vector<double> ratios;
    for (std::size_t i = 1; i < lengths.size(); ++i) {
        if (lengths[i] != 2 * lengths[i - 1]) {
            throw ParameterError("scaling check needs doubling lengths, got " + std::to_string(lengths[i - 1]) +
                                 " then " + std::to_string(lengths[i]));
        }
        const auto& a = report.cell(measure, lengths[i - 1]);
        const auto& b = report.cell(measure, lengths[i]);
        if (a.failed() || b.failed() || !(a.seconds_mean > 0.0)) {
            throw ParameterError("scaling check has a failed or empty cell at length " + std::to_string(lengths[i]));
        }
        ratios.push_back(b.seconds_mean / a.seconds_mean);
    }
    return ratios;
}

/// Same ratios from raw timings, one per doubling step.
inline std::vector<double> timing_ratios(const std::vector<double>& seconds) {
    if (seconds.size() < 2) throw ParameterError("need at least two timings");
    std::vector<double> out;
    for (std::size_t i = 1; i < seconds.size(); ++i) out.push_back(seconds[i] / seconds[i - 1]);
    return out;
}

// ---------------------------------------------------------------------------
// Acceptance bounds on a report

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Bounds for the clustering-quality cells that are present in the report:
/// extended cepstral exactly 1 with zero spread, the raw-data baselines near
/// zero, and the known-model norms.
inline std::vector<CheckResult> check_report(const ExperimentReport& report) {
    std::vector<CheckResult> out;
    auto fmt = [](double v) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.6f", v);
        return std::string(buf);
    };
    for (const auto& c : report.cells) {
        CheckResult r;
        r.name = std::string(to_string(c.measure)) + " @ " + std::to_string(c.length);
        const std::string stats = "ARI " + fmt(c.ari_mean) + " +- " + fmt(c.ari_std);
        if (c.failed()) {
            r.passed = false;
            r.detail = std::to_string(c.runs.size() - c.completed()) + " repetition(s) failed";
            out.push_back(std::move(r));
            continue;
        }
        switch (c.measure) {
            case Measure::extended_cepstral:
                r.passed = c.ari_mean == 1.0 && c.ari_std == 0.0;
                r.detail = stats + " (need 1 +- 0)";
                break;
            case Measure::euclidean:
            case Measure::keogh_lb:
            case Measure::cepstral:
                r.passed = std::abs(c.ari_mean) <= 0.05;
                r.detail = stats + " (need |mean| <= 0.05)";
                break;
            case Measure::h2:
                r.passed = c.ari_mean == 1.0;
                r.detail = stats + " (need 1)";
                break;
            case Measure::hinf:
                r.passed = c.ari_mean >= 0.9;
                r.detail = stats + " (need >= 0.9)";
                break;
            case Measure::dtw: continue;
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline bool all_passed(const std::vector<CheckResult>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

}  // namespace cepclust
