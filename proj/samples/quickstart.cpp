// Generates a small two-circuit dataset, clusters it with each measure and
// prints the adjusted Rand index against the true system labels.
#include <cstdio>

#include "cepclust/cepclust.hpp"

int main() {
    using namespace cepclust;
    const std::size_t n = 1024;
    const LabeledDataset ds = build_paper_dataset(n, kDeskCounts, paper_circuits(), 7);

    MeasureConfig cfg;
    cfg.welch = default_welch_config(n);

    std::printf("%zu pairs of length %zu\n", ds.size(), n);
    for (Measure m : {Measure::euclidean, Measure::keogh_lb, Measure::cepstral, Measure::extended_cepstral,
                      Measure::h2, Measure::hinf}) {
        const DistanceMatrix d = pairwise_matrix(ds, m, cfg);
        const Partition p = cut(hierarchical_cluster(d, Linkage::average), 2);
        std::printf("%-18s ARI %.3f\n", std::string(to_string(m)).c_str(), adjusted_rand_index(p.labels(), ds.ground_truth));
    }
}
