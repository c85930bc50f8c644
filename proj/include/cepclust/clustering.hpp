#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cepclust/errors.hpp"
#include "cepclust/parallel.hpp"

namespace cepclust {

/// Symmetric, zero-diagonal, finite, nonnegative n x n matrix.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

    /// Builds from dense rows and validates every invariant.
    static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        DistanceMatrix m(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) {
                throw ValidationError("distance matrix row " + std::to_string(i) + " has " +
                                      std::to_string(rows[i].size()) + " entries, expected " +
                                      std::to_string(rows.size()));
            }
            std::copy(rows[i].begin(), rows[i].end(), m.entries_.begin() + static_cast<std::ptrdiff_t>(i * m.n_));
        }
        m.validate();
        return m;
    }

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }

    /// Writes both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double value) noexcept {
        entries_[i * n_ + j] = value;
        entries_[j * n_ + i] = value;
    }

    DistanceMatrix scaled(double factor) const {
        DistanceMatrix m(*this);
        for (double& v : m.entries_) v *= factor;
        return m;
    }

    void validate() const {
        for (std::size_t i = 0; i < n_; ++i) {
            if ((*this)(i, i) != 0.0) {
                throw ValidationError("distance matrix diagonal entry " + std::to_string(i) + " is not zero");
            }
            for (std::size_t j = 0; j < n_; ++j) {
                const double v = (*this)(i, j);
                if (!std::isfinite(v) || v < 0.0) {
                    throw ValidationError("distance matrix entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                          ") is negative or non-finite");
                }
                if (v != (*this)(j, i)) {
                    throw ValidationError("distance matrix is not symmetric at (" + std::to_string(i) + ", " +
                                          std::to_string(j) + ")");
                }
            }
        }
    }

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

/// Evaluates dist(i, j) once per unordered pair i < j and mirrors it.
/// Cells are disjoint, so workers never contend; failures surface as
/// MeasureError carrying the offending indices.
template <class Dist>
DistanceMatrix pairwise_matrix(std::size_t n, Dist&& dist, std::size_t threads = 1) {
    DistanceMatrix m(n);
    if (n < 2) return m;
    // row i owns cells (i, j > i); rows are interleaved across workers
    parallel_for(n - 1, threads, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double v;
            try {
                v = dist(i, j);
            } catch (const MeasureError&) {
                throw;
            } catch (const std::exception& e) {
                throw MeasureError(i, j, e.what());
            }
            if (!std::isfinite(v) || v < 0.0) {
                throw MeasureError(i, j, "distance is negative or non-finite");
            }
            m.set(i, j, v);
        }
    });
    return m;
}

// ---------------------------------------------------------------------------
// Agglomerative clustering

enum class Linkage { average, complete, single };

inline std::string_view to_string(Linkage l) {
    switch (l) {
        case Linkage::average: return "average";
        case Linkage::complete: return "complete";
        case Linkage::single: return "single";
    }
    return "?";
}

inline Linkage parse_linkage(std::string_view name) {
    if (name == "average") return Linkage::average;
    if (name == "complete") return Linkage::complete;
    if (name == "single") return Linkage::single;
    throw ConfigError("unknown linkage '" + std::string(name) + "'");
}

/// Points are clusters 0..n-1; merge t creates cluster n + t.
struct Merge {
    std::size_t a;
    std::size_t b;
    double height;
    std::size_t size;
};

struct Dendrogram {
    std::size_t n = 0;
    std::vector<Merge> merges;
};

/// Cluster labels 0..k-1, every label used.
class Partition {
public:
    Partition() = default;
    Partition(std::vector<int> labels, std::size_t k) : labels_(std::move(labels)), k_(k) {
        std::vector<bool> seen(k, false);
        for (int l : labels_) {
            if (l < 0 || static_cast<std::size_t>(l) >= k) {
                throw ValidationError("partition label " + std::to_string(l) + " outside [0, " + std::to_string(k) + ")");
            }
            seen[static_cast<std::size_t>(l)] = true;
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
            throw ValidationError("partition does not use every label in [0, " + std::to_string(k) + ")");
        }
    }

    /// Compacts arbitrary integer labels into 0..k-1 in order of first use.
    static Partition from_labels(const std::vector<int>& raw) {
        std::vector<int> seen;
        std::vector<int> out(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            auto it = std::find(seen.begin(), seen.end(), raw[i]);
            if (it == seen.end()) {
                seen.push_back(raw[i]);
                it = seen.end() - 1;
            }
            out[i] = static_cast<int>(it - seen.begin());
        }
        return Partition(std::move(out), seen.size());
    }

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t clusters() const noexcept { return k_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    int operator[](std::size_t i) const noexcept { return labels_[i]; }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<int> labels_;
    std::size_t k_ = 0;
};

/// Naive O(n^3) agglomeration with Lance-Williams updates. Among equal
/// heights the lexicographically smallest (slot i, slot j) pair merges first.
inline Dendrogram hierarchical_cluster(const DistanceMatrix& matrix, Linkage linkage = Linkage::average) {
    const std::size_t n = matrix.size();
    Dendrogram dendro;
    dendro.n = n;
    if (n < 2) return dendro;

    std::vector<double> d(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = matrix(i, j);
    }
    std::vector<std::size_t> id(n), size(n, 1);
    std::iota(id.begin(), id.end(), std::size_t{0});
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), std::size_t{0});

    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t x = 0; x < active.size(); ++x) {
            const std::size_t i = active[x];
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                const std::size_t j = active[y];
                if (d[i * n + j] < best) {
                    best = d[i * n + j];
                    bi = i;
                    bj = j;
                }
            }
        }

        const double ni = static_cast<double>(size[bi]);
        const double nj = static_cast<double>(size[bj]);
        for (std::size_t x : active) {
            if (x == bi || x == bj) continue;
            const double dix = d[bi * n + x];
            const double djx = d[bj * n + x];
            double v = 0.0;
            switch (linkage) {
                case Linkage::single: v = std::min(dix, djx); break;
                case Linkage::complete: v = std::max(dix, djx); break;
                case Linkage::average: v = (ni * dix + nj * djx) / (ni + nj); break;
            }
            d[bi * n + x] = v;
            d[x * n + bi] = v;
        }

        dendro.merges.push_back({std::min(id[bi], id[bj]), std::max(id[bi], id[bj]), best, size[bi] + size[bj]});
        id[bi] = n + step;
        size[bi] += size[bj];
        active.erase(std::find(active.begin(), active.end(), bj));
    }
    return dendro;
}

/// Undoes the last k - 1 merges. Components are labelled in order of their
/// smallest member.
inline Partition cut(const Dendrogram& dendro, std::size_t k) {
    const std::size_t n = dendro.n;
    if (k < 1 || k > n) {
        throw ParameterError("cluster count k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&parent](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    // representative point of every cluster id created so far
    std::vector<std::size_t> rep(n + dendro.merges.size());
    std::iota(rep.begin(), rep.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
    for (std::size_t t = 0; t < n - k; ++t) {
        const auto& m = dendro.merges[t];
        const std::size_t ra = find(rep[m.a]);
        const std::size_t rb = find(rep[m.b]);
        parent[std::max(ra, rb)] = std::min(ra, rb);
        rep[n + t] = std::min(ra, rb);
    }
    std::vector<int> labels(n, -1);
    std::vector<int> root_label(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (root_label[r] < 0) root_label[r] = next++;
        labels[i] = root_label[r];
    }
    return Partition(std::move(labels), k);
}

}  // namespace cepclust
