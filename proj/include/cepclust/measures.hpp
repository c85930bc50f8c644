#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cepclust/clustering.hpp"
#include "cepclust/dataset.hpp"
#include "cepclust/distances.hpp"
#include "cepclust/errors.hpp"
#include "cepclust/lti.hpp"
#include "cepclust/parallel.hpp"
#include "cepclust/spectral.hpp"

namespace cepclust {

enum class Measure { euclidean, dtw, keogh_lb, cepstral, extended_cepstral, h2, hinf };

inline constexpr std::array kAllMeasures{Measure::euclidean, Measure::dtw,  Measure::keogh_lb,
                                         Measure::cepstral,  Measure::extended_cepstral,
                                         Measure::h2,        Measure::hinf};

inline std::string_view to_string(Measure m) {
    switch (m) {
        case Measure::euclidean: return "euclidean";
        case Measure::dtw: return "dtw";
        case Measure::keogh_lb: return "keogh-lb";
        case Measure::cepstral: return "cepstral";
        case Measure::extended_cepstral: return "extended-cepstral";
        case Measure::h2: return "h2";
        case Measure::hinf: return "hinf";
    }
    return "?";
}

inline Measure parse_measure(std::string_view name) {
    for (Measure m : kAllMeasures) {
        if (to_string(m) == name) return m;
    }
    throw ConfigError("unknown measure '" + std::string(name) + "'");
}

/// True for the norms evaluated on the ground-truth generating models.
constexpr bool is_model_norm(Measure m) noexcept { return m == Measure::h2 || m == Measure::hinf; }

struct MeasureConfig {
    WelchConfig welch;
    DtwConfig dtw;
    std::size_t hinf_grid = kDefaultHinfGrid;
};

/// A measure bound to one dataset. Per-pair features (cepstra, system
/// cepstra, model distances) are computed once at construction and reused by
/// every call, so an n-pair matrix costs n feature extractions, not n^2.
class DatasetDistance {
public:
    DatasetDistance(const LabeledDataset& ds, Measure measure, const MeasureConfig& cfg, std::size_t threads = 1)
        : ds_(&ds), measure_(measure), cfg_(cfg) {
        const std::size_t n = ds.size();
        switch (measure) {
            case Measure::cepstral:
                cepstra_.resize(n);
                parallel_for(n, threads, [&](std::size_t i) {
                    cepstra_[i] = power_cepstrum(ds.pairs[i].output, cfg_.welch);
                });
                break;
            case Measure::extended_cepstral:
                system_cepstra_.resize(n);
                parallel_for(n, threads, [&](std::size_t i) {
                    system_cepstra_[i] = system_cepstrum(ds.pairs[i], cfg_.welch);
                });
                break;
            case Measure::h2:
            case Measure::hinf: prepare_model_distances(); break;
            default: break;
        }
    }

    Measure measure() const noexcept { return measure_; }

    double operator()(std::size_t i, std::size_t j) const {
        const auto& a = ds_->pairs[i];
        const auto& b = ds_->pairs[j];
        switch (measure_) {
            case Measure::euclidean: return d_euclidean(a.output, b.output);
            case Measure::dtw: return d_dtw_exact(a.output, b.output, cfg_.dtw);
            case Measure::keogh_lb: return lb_keogh(a.output, b.output, cfg_.dtw);
            case Measure::cepstral: return cepstral_distance(cepstra_[i], cepstra_[j]);
            case Measure::extended_cepstral: return extended_cepstral_distance(system_cepstra_[i], system_cepstra_[j]);
            case Measure::h2:
            case Measure::hinf: {
                const auto si = static_cast<std::size_t>(ds_->ground_truth[i]);
                const auto sj = static_cast<std::size_t>(ds_->ground_truth[j]);
                return model_distances_.at({std::min(si, sj), std::max(si, sj)});
            }
        }
        throw ParameterError("unknown measure");
    }

private:
    void prepare_model_distances() {
        if (ds_->systems.empty()) {
            throw ConfigError("model-norm measures need the generating systems of the dataset");
        }
        const ModelNorm norm = measure_ == Measure::h2 ? ModelNorm::h2 : ModelNorm::hinf;
        for (int label : ds_->ground_truth) {
            if (static_cast<std::size_t>(label) >= ds_->systems.size()) {
                throw ConfigError("label " + std::to_string(label) + " has no generating system");
            }
        }
        for (std::size_t s = 0; s < ds_->systems.size(); ++s) {
            model_distances_[{s, s}] = 0.0;
            for (std::size_t t = s + 1; t < ds_->systems.size(); ++t) {
                model_distances_[{s, t}] = model_distance(ds_->systems[s], ds_->systems[t], norm, cfg_.hinf_grid);
            }
        }
    }

    const LabeledDataset* ds_;
    Measure measure_;
    MeasureConfig cfg_;
    std::vector<Cepstrum> cepstra_;
    std::vector<SystemCepstrum> system_cepstra_;
    std::map<std::pair<std::size_t, std::size_t>, double> model_distances_;
};

inline DistanceMatrix pairwise_matrix(const LabeledDataset& ds, Measure measure, const MeasureConfig& cfg,
                                      std::size_t threads = 1) {
    const DatasetDistance dist(ds, measure, cfg, threads);
    return pairwise_matrix(ds.size(), dist, threads);
}

}  // namespace cepclust
