#include <doctest.h>

#include <cmath>

#include "mubsort/error.hpp"
#include "mubsort/qkd.hpp"

using namespace mubsort;

namespace {

constexpr std::array<double, 4> kUniform{0.25, 0.25, 0.25, 0.25};

std::array<CrosstalkTable, 4> ideal_tables() {
  const auto t = build_mub_table();
  return {ideal_crosstalk_table(t, 1), ideal_crosstalk_table(t, 2), ideal_crosstalk_table(t, 3),
          ideal_crosstalk_table(t, 4)};
}

std::array<CrosstalkTable, 4> uniform_tables() {
  auto tables = ideal_tables();
  for (auto& table : tables) {
    for (auto& row : table.rows) {
      row.reference = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
      row.residual = 0.0;
    }
  }
  return tables;
}

std::array<CrosstalkTable, 4> physical_tables(bool degenerate) {
  const auto t = build_mub_table();
  std::array<CrosstalkTable, 4> tables;
  for (int b = 1; b <= 4; ++b) {
    SorterConfig cfg;
    cfg.mub_index = b;
    cfg.degenerate_kz = degenerate;
    const auto spec = build_sorter(cfg, t);
    tables[static_cast<std::size_t>(b - 1)] = crosstalk_table(spec, t, find_zmax(spec).common);
  }
  return tables;
}

double binomial_sigma(double p, std::uint64_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

}  // namespace

TEST_CASE("analytic metrics for reference tables") {
  const auto ideal = qkd_metrics(ideal_tables(), kUniform);
  CHECK(ideal.sift_fraction == 0.25);
  CHECK(ideal.symbol_error_rate < 1e-15);

  const auto uniform = qkd_metrics(uniform_tables(), kUniform);
  CHECK(std::abs(uniform.symbol_error_rate - 2.0 / 3.0) < 1e-15);
  for (double s : uniform.per_basis_ser) CHECK(std::abs(s - 2.0 / 3.0) < 1e-15);

  const auto skewed = qkd_metrics(uniform_tables(), {0.5, 0.2, 0.2, 0.1});
  CHECK(std::abs(skewed.sift_fraction - (0.25 + 0.04 + 0.04 + 0.01)) < 1e-15);
}

TEST_CASE("weights follow the sifted share of each basis") {
  auto tables = ideal_tables();
  for (auto& row : tables[1].rows) {
    if (row.mub == 2) {
      row.reference = {0.0, 0.0, 0.0};
      row.reference[static_cast<std::size_t>((row.index + 1) % 3)] = 1.0;
    }
  }
  const std::array<double, 4> probs{0.4, 0.3, 0.2, 0.1};
  const auto m = qkd_metrics(tables, probs);
  CHECK(m.per_basis_ser[1] == 1.0);
  CHECK(m.per_basis_ser[0] == 0.0);
  CHECK(std::abs(m.symbol_error_rate - 0.09 / 0.30) < 1e-15);
}

TEST_CASE("residual outcomes count as errors") {
  auto tables = ideal_tables();
  for (auto& row : tables[3].rows) {
    if (row.mub == 4) {
      row.reference[static_cast<std::size_t>(row.index)] = 0.9;
      row.residual = 0.1;
    }
  }
  const auto m = qkd_metrics(tables, kUniform);
  CHECK(std::abs(m.per_basis_ser[3] - 0.1) < 1e-15);
  CHECK(std::abs(m.symbol_error_rate - 0.025) < 1e-15);
}

TEST_CASE("relabeling states leaves metrics unchanged") {
  const auto tables = physical_tables(false);
  const auto base = qkd_metrics(tables, kUniform);
  const int perm[3] = {1, 2, 0};
  auto relabeled = tables;
  for (int b = 0; b < 4; ++b) {
    const auto& src = tables[static_cast<std::size_t>(b)];
    auto& dst = relabeled[static_cast<std::size_t>(b)];
    for (std::size_t r = 0; r < 12; ++r) {
      auto& row = dst.rows[r];
      // matched rows move with the relabeling; every row has its columns permuted
      const auto& from = row.mub == b + 1 ? src.rows[r - static_cast<std::size_t>(row.index) +
                                                    static_cast<std::size_t>(perm[row.index])]
                                          : src.rows[r];
      for (std::size_t k = 0; k < 3; ++k) row.reference[k] = from.reference[static_cast<std::size_t>(perm[k])];
      row.residual = from.residual;
    }
  }
  const auto moved = qkd_metrics(relabeled, kUniform);
  CHECK(std::abs(moved.symbol_error_rate - base.symbol_error_rate) < 1e-15);
  for (std::size_t b = 0; b < 4; ++b) CHECK(std::abs(moved.per_basis_ser[b] - base.per_basis_ser[b]) < 1e-15);
}

TEST_CASE("physical sorters") {
  const auto degenerate = qkd_metrics(physical_tables(true), kUniform);
  CHECK(degenerate.symbol_error_rate < 1e-6);
  CHECK(degenerate.sift_fraction == 0.25);

  const auto tables = physical_tables(false);
  const auto m = qkd_metrics(tables, kUniform);
  CHECK(m.symbol_error_rate > 0.0);
  CHECK(m.symbol_error_rate < 0.05);
  const auto mc = simulate_exchange(tables, kUniform, 1000000, 11);
  const double sigma = binomial_sigma(m.symbol_error_rate, mc.sifted);
  CHECK(std::abs(mc.metrics.symbol_error_rate - m.symbol_error_rate) < 5.0 * std::max(sigma, 1e-12));
}

TEST_CASE("monte carlo convergence and determinism") {
  const auto ideal = simulate_exchange(ideal_tables(), kUniform, 1000000, 3);
  CHECK(ideal.symbols == 1000000);
  CHECK(ideal.metrics.symbol_error_rate < 1e-5);
  CHECK(std::abs(static_cast<double>(ideal.sifted) / 1e6 - 0.25) < 5.0 * binomial_sigma(0.25, 1000000));

  const auto uniform = simulate_exchange(uniform_tables(), kUniform, 1000000, 3);
  CHECK(std::abs(uniform.metrics.symbol_error_rate - 2.0 / 3.0) < 3.0 * binomial_sigma(2.0 / 3.0, uniform.sifted));
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
  for (std::size_t b = 0; b < 4; ++b) {
    sifted += uniform.sifted_per_basis[b];
    errors += uniform.errors_per_basis[b];
  }
  CHECK(sifted == uniform.sifted);
  CHECK(errors == uniform.errors);

  const auto again = simulate_exchange(uniform_tables(), kUniform, 1000000, 3);
  CHECK(again.errors == uniform.errors);
  CHECK(again.sifted == uniform.sifted);
  CHECK(again.metrics.symbol_error_rate == uniform.metrics.symbol_error_rate);
  const auto other = simulate_exchange(uniform_tables(), kUniform, 1000000, 4);
  CHECK(other.errors != uniform.errors);
}

TEST_CASE("malformed inputs") {
  auto tables = ideal_tables();
  CHECK_THROWS_AS(qkd_metrics(tables, {0.5, 0.5, 0.5, 0.5}), InvalidSpec);
  CHECK_THROWS_AS(qkd_metrics(tables, {1.2, -0.2, 0.0, 0.0}), InvalidSpec);
  CHECK_THROWS_AS(simulate_exchange(tables, kUniform, 0, 1), InvalidSpec);

  auto swapped = tables;
  std::swap(swapped[0], swapped[1]);
  CHECK_THROWS_AS(qkd_metrics(swapped, kUniform), InvalidSpec);

  auto short_table = tables;
  short_table[2].rows.pop_back();
  CHECK_THROWS_AS(qkd_metrics(short_table, kUniform), InvalidSpec);

  auto duplicate = tables;
  duplicate[2].rows[1] = duplicate[2].rows[0];
  CHECK_THROWS_AS(qkd_metrics(duplicate, kUniform), InvalidSpec);

  auto unnormalized = tables;
  unnormalized[3].rows[4].residual += 0.1;
  CHECK_THROWS_AS(qkd_metrics(unnormalized, kUniform), InvalidSpec);

  auto negative = tables;
  negative[3].rows[4].reference = {-0.5, 1.0, 0.5};
  CHECK_THROWS_AS(qkd_metrics(negative, kUniform), InvalidSpec);
}
