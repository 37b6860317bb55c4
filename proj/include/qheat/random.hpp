#pragma once

// Seeded generators for property checks. Deterministic for a given engine state.

#include <random>

#include "qheat/qcore.hpp"

namespace qheat::random {

using Engine = std::mt19937_64;

/// Entries with real and imaginary parts uniform in [-1, 1].
CMatrix complex_matrix(Engine& rng, std::size_t dim);

CMatrix hermitian(Engine& rng, std::size_t dim);

/// Haar-ish unitary from QR of a complex Gaussian matrix.
CMatrix unitary(Engine& rng, std::size_t dim);

/// Full-rank mixed state G G^dagger / Tr(.) from a complex Gaussian G.
DensityOperator density(Engine& rng, std::size_t dim, Layout layout = {});

/// Random correlation term on `layout`: a Hermitian matrix with every local
/// marginal projected out, scaled to max element `scale`.
CorrelationTerm correlation(Engine& rng, const Layout& layout, double scale = 0.05);

}  // namespace qheat::random
