#include "mubsort/qkd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mubsort/error.hpp"

namespace mubsort {

namespace {

constexpr double kProbabilityTol = 1e-6;

using MatchedRows = std::array<std::array<std::array<double, 3>, 3>, 4>;

// matched[b][s] = reference probabilities of state s of basis b+1 through sorter b+1.
MatchedRows matched_rows(const std::array<CrosstalkTable, 4>& tables) {
  MatchedRows matched{};
  for (int b = 0; b < 4; ++b) {
    const auto& table = tables[static_cast<std::size_t>(b)];
    const std::string which = "crosstalk table " + std::to_string(b + 1);
    if (table.sorter_mub != b + 1) throw InvalidSpec(which + " was not produced by sorter " + std::to_string(b + 1));
    if (table.rows.size() != 12) throw InvalidSpec(which + " must have 12 rows");
    std::array<std::array<bool, 3>, 4> seen{};
    for (const auto& row : table.rows) {
      if (row.mub < 1 || row.mub > 4 || row.index < 0 || row.index > 2) throw InvalidSpec(which + ": bad row label");
      auto& flag = seen[static_cast<std::size_t>(row.mub - 1)][static_cast<std::size_t>(row.index)];
      if (flag) throw InvalidSpec(which + ": duplicate row " + row.label);
      flag = true;
      double total = row.residual;
      for (double p : row.reference) total += p;
      for (double p : {row.reference[0], row.reference[1], row.reference[2], row.residual}) {
        if (!std::isfinite(p) || p < -kProbabilityTol || p > 1.0 + kProbabilityTol) {
          throw InvalidSpec(which + ": probability out of range in row " + row.label);
        }
      }
      if (std::abs(total - 1.0) > kProbabilityTol) throw InvalidSpec(which + ": row " + row.label + " does not sum to 1");
      if (row.mub == b + 1) {
        matched[static_cast<std::size_t>(b)][static_cast<std::size_t>(row.index)] = row.reference;
      }
    }
  }
  return matched;
}

void check_basis_probs(const std::array<double, 4>& basis_probs) {
  double total = 0.0;
  for (double p : basis_probs) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidSpec("basis probabilities must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidSpec("basis probabilities must sum to 1");
}

// 53 random bits mapped onto [0, 1).
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int pick_basis(const std::array<double, 4>& probs, double u) {
  double acc = 0.0;
  for (int b = 0; b < 3; ++b) {
    acc += probs[static_cast<std::size_t>(b)];
    if (u < acc) return b;
  }
  return 3;
}

}  // namespace

QkdMetrics qkd_metrics(const std::array<CrosstalkTable, 4>& tables, const std::array<double, 4>& basis_probs) {
  check_basis_probs(basis_probs);
  const MatchedRows matched = matched_rows(tables);
  QkdMetrics m;
  for (int b = 0; b < 4; ++b) {
    const double pb = basis_probs[static_cast<std::size_t>(b)];
    m.sift_fraction += pb * pb;
    double correct = 0.0;
    for (int s = 0; s < 3; ++s) {
      correct += matched[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)][static_cast<std::size_t>(s)];
    }
    m.per_basis_ser[static_cast<std::size_t>(b)] = std::clamp(1.0 - correct / 3.0, 0.0, 1.0);
  }
  for (int b = 0; b < 4; ++b) {
    const double pb = basis_probs[static_cast<std::size_t>(b)];
    m.symbol_error_rate += (pb * pb / m.sift_fraction) * m.per_basis_ser[static_cast<std::size_t>(b)];
  }
  return m;
}

ExchangeResult simulate_exchange(const std::array<CrosstalkTable, 4>& tables, const std::array<double, 4>& basis_probs,
                                 std::uint64_t n_symbols, std::uint64_t seed) {
  check_basis_probs(basis_probs);
  if (n_symbols < 1) throw InvalidSpec("monte carlo needs at least one symbol");
  const MatchedRows matched = matched_rows(tables);
  std::mt19937_64 rng(seed);

  ExchangeResult out;
  out.symbols = n_symbols;
  for (std::uint64_t n = 0; n < n_symbols; ++n) {
    const int alice = pick_basis(basis_probs, uniform01(rng));
    const int state = std::min(2, static_cast<int>(uniform01(rng) * 3.0));
    const int bob = pick_basis(basis_probs, uniform01(rng));
    const double u = uniform01(rng);
    if (alice != bob) continue;

    const auto& p = matched[static_cast<std::size_t>(bob)][static_cast<std::size_t>(state)];
    int outcome = 3;  // residual: no reference click
    double acc = 0.0;
    for (int k = 0; k < 3; ++k) {
      acc += p[static_cast<std::size_t>(k)];
      if (u < acc) {
        outcome = k;
        break;
      }
    }
    ++out.sifted;
    ++out.sifted_per_basis[static_cast<std::size_t>(bob)];
    if (outcome != state) {
      ++out.errors;
      ++out.errors_per_basis[static_cast<std::size_t>(bob)];
    }
  }

  out.metrics.sift_fraction = static_cast<double>(out.sifted) / static_cast<double>(n_symbols);
  out.metrics.symbol_error_rate =
      out.sifted > 0 ? static_cast<double>(out.errors) / static_cast<double>(out.sifted) : 0.0;
  for (std::size_t b = 0; b < 4; ++b) {
    out.metrics.per_basis_ser[b] = out.sifted_per_basis[b] > 0 ? static_cast<double>(out.errors_per_basis[b]) /
                                                                     static_cast<double>(out.sifted_per_basis[b])
                                                               : 0.0;
  }
  return out;
}

}  // namespace mubsort
