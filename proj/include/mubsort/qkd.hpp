#pragma once

#include <array>
#include <cstdint>

#include "mubsort/sorter.hpp"

namespace mubsort {

/// Twelve-state protocol figures of merit. Alice's preparation and the
/// channel are ideal; every error comes from sorter crosstalk. A residual
/// (no reference click) outcome counts as a wrong symbol.
struct QkdMetrics {
  double sift_fraction = 0.0;
  double symbol_error_rate = 0.0;
  std::array<double, 4> per_basis_ser{};
};

/// `tables[b]` is the crosstalk table of the basis-(b+1) sorter at its own
/// operating depth. Alice and Bob draw bases independently from
/// `basis_probs`; sift_fraction = Σ p_b², the overall error rate weights basis
/// b by its share of sifted symbols p_b² / Σ p². Throws InvalidSpec on
/// malformed tables or probabilities.
QkdMetrics qkd_metrics(const std::array<CrosstalkTable, 4>& tables, const std::array<double, 4>& basis_probs);

struct ExchangeResult {
  QkdMetrics metrics;
  std::uint64_t symbols = 0;
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
  std::array<std::uint64_t, 4> sifted_per_basis{};
  std::array<std::uint64_t, 4> errors_per_basis{};
};

/// Monte Carlo of `n_symbols` exchanges from a seeded mt19937_64 stream.
/// Uniform variates are built from the raw 64-bit output so results are
/// bit-identical across standard libraries.
ExchangeResult simulate_exchange(const std::array<CrosstalkTable, 4>& tables, const std::array<double, 4>& basis_probs,
                                 std::uint64_t n_symbols, std::uint64_t seed);

}  // namespace mubsort
