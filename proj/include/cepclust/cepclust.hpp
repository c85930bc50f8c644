#pragma once

// Core library. File formats live in cepclust/io.hpp, which additionally
// needs nlohmann/json and zlib.

#include "cepclust/clustering.hpp"
#include "cepclust/dataset.hpp"
#include "cepclust/distances.hpp"
#include "cepclust/errors.hpp"
#include "cepclust/evaluation.hpp"
#include "cepclust/fft.hpp"
#include "cepclust/lti.hpp"
#include "cepclust/measures.hpp"
#include "cepclust/parallel.hpp"
#include "cepclust/rng.hpp"
#include "cepclust/signal.hpp"
#include "cepclust/spectral.hpp"
