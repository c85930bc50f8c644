// Prints the gain of both discretized circuits on a frequency grid, along with
// their H2 and Hinf norms and the model distances between them.
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "cepclust/lti.hpp"

int main() {
    using namespace cepclust;
    const StateSpace s1 = discrete_circuit(kCircuitS1);
    const StateSpace s2 = discrete_circuit(kCircuitS2);

    std::printf("# omega  |S1|  |S2|\n");
    for (int i = 1; i <= 32; ++i) {
        const double w = std::numbers::pi * i / 32.0;
        std::printf("%.4f %.6g %.6g\n", w, std::abs(s1.transfer(std::polar(1.0, w))), std::abs(s2.transfer(std::polar(1.0, w))));
    }
    std::printf("# H2:   S1 %.6g  S2 %.6g  S1-S2 %.6g\n", h2_norm(s1), h2_norm(s2),
                model_distance(s1, s2, ModelNorm::h2));
    std::printf("# Hinf: S1 %.6g  S2 %.6g  S1-S2 %.6g\n", hinf_norm(s1), hinf_norm(s2),
                model_distance(s1, s2, ModelNorm::hinf));
}
