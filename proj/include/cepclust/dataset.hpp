#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cepclust/errors.hpp"
#include "cepclust/lti.hpp"
#include "cepclust/rng.hpp"
#include "cepclust/signal.hpp"

namespace cepclust {

enum class InputKind { lti, multisine, white_noise };

inline std::string_view to_string(InputKind k) {
    switch (k) {
        case InputKind::lti: return "lti";
        case InputKind::multisine: return "multisine";
        case InputKind::white_noise: return "white_noise";
    }
    return "?";
}

/// Number of inputs of each kind fed to every system.
struct InputCounts {
    std::size_t lti = 0;
    std::size_t multisine = 0;
    std::size_t white_noise = 0;

    std::size_t total() const noexcept { return lti + multisine + white_noise; }
    friend bool operator==(const InputCounts&, const InputCounts&) = default;
};

inline constexpr InputCounts kPaperCounts{100, 50, 50};
inline constexpr InputCounts kDeskCounts{10, 5, 5};
inline constexpr int kInputFilterOrder = 15;

/// I/O pairs with one ground-truth label per pair. `systems[label]` is the
/// model that generated the pair; only the model-norm measures look at it.
struct LabeledDataset {
    std::vector<IOPair> pairs;
    std::vector<int> ground_truth;
    std::vector<StateSpace> systems;
    std::vector<InputKind> input_kinds;

    std::size_t size() const noexcept { return pairs.size(); }

    void validate() const {
        if (ground_truth.size() != pairs.size()) {
            throw ValidationError("dataset has " + std::to_string(pairs.size()) + " pairs but " +
                                  std::to_string(ground_truth.size()) + " labels");
        }
        for (int label : ground_truth) {
            if (label < 0) throw ValidationError("negative ground-truth label");
        }
    }

    std::size_t distinct_labels() const {
        return std::set<int>(ground_truth.begin(), ground_truth.end()).size();
    }
};

/// Generates one input of the requested kind. Pure function of (kind, n, seed).
inline TimeSeries generate_input(InputKind kind, std::size_t n, std::uint64_t seed) {
    switch (kind) {
        case InputKind::lti: return gen_lti_filtered_input(n, kInputFilterOrder, seed);
        case InputKind::multisine: return gen_random_multisine(n, seed);
        case InputKind::white_noise: return gen_white_noise(n, 1.0, seed);
    }
    throw ParameterError("unknown input kind");
}

/// Every system is driven by the same set of counts.total() inputs. Pairs are
/// ordered system-major; pair i has label i / counts.total().
inline LabeledDataset build_paper_dataset(std::size_t n, const InputCounts& counts,
                                          const std::vector<StateSpace>& systems, std::uint64_t seed) {
    if (systems.empty()) throw ParameterError("at least one system is required");
    if (n < 2) throw InvalidLengthError("series length must be >= 2, got " + std::to_string(n));
    for (std::size_t s = 0; s < systems.size(); ++s) {
        if (!systems[s].is_stable()) {
            throw DivergenceError("system " + std::to_string(s) + " is unstable (spectral radius " +
                                  std::to_string(systems[s].spectral_radius()) + ")");
        }
    }

    std::vector<InputKind> kinds;
    kinds.insert(kinds.end(), counts.lti, InputKind::lti);
    kinds.insert(kinds.end(), counts.multisine, InputKind::multisine);
    kinds.insert(kinds.end(), counts.white_noise, InputKind::white_noise);

    std::vector<TimeSeries> inputs;
    inputs.reserve(kinds.size());
    for (std::size_t m = 0; m < kinds.size(); ++m) {
        inputs.push_back(generate_input(kinds[m], n, derive_seed(seed, m)));
    }

    LabeledDataset ds;
    ds.systems = systems;
    for (std::size_t s = 0; s < systems.size(); ++s) {
        const double dt = systems[s].sample_period;
        for (std::size_t m = 0; m < inputs.size(); ++m) {
            TimeSeries u({inputs[m].values().begin(), inputs[m].values().end()}, dt);
            TimeSeries y = simulate(systems[s], u);
            ds.pairs.emplace_back(std::move(u), std::move(y), ds.pairs.size());
            ds.ground_truth.push_back(static_cast<int>(s));
            ds.input_kinds.push_back(kinds[m]);
        }
    }
    return ds;
}

/// The two circuits S1 and S2, discretized.
inline std::vector<StateSpace> paper_circuits(double dt = kDefaultCircuitSamplePeriod,
                                              Discretization method = kDefaultCircuitDiscretization) {
    return {discrete_circuit(kCircuitS1, dt, method), discrete_circuit(kCircuitS2, dt, method)};
}

}  // namespace cepclust
