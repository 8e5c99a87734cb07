#include "mubsort/hilbert.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "mubsort/error.hpp"

namespace mubsort {

namespace {

bool is_odd_prime(int d) {
  if (d < 3 || d % 2 == 0) return false;
  for (int f = 3; f * f <= d; f += 2) {
    if (d % f == 0) return false;
  }
  return true;
}

// Powers of z = exp(i2π/3) on (|a>, |b>, |c>) for bases 2..4, rows a, b, c.
constexpr std::array<std::array<std::array<int, 3>, 3>, 3> kTable3Phases = {{
    {{{0, 0, 0}, {0, 1, 2}, {0, 2, 1}}},
    {{{0, 0, 1}, {0, 1, 0}, {0, 2, 2}}},
    {{{0, 0, 2}, {0, 1, 1}, {0, 2, 0}}},
}};

}  // namespace

Complex omega(int d, long long power) {
  if (d < 2) throw InvalidDimension("omega: dimension must be >= 2, got " + std::to_string(d));
  long long r = power % d;
  if (r < 0) r += d;
  if (r == 0) return {1.0, 0.0};
  // Conjugate pairs ω^r, ω^(d-r) are bitwise conjugates of each other.
  if (2 * r > d) return std::conj(omega(d, d - r));
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / d;
  return std::polar(1.0, angle);
}

StateVector StateVector::normalized(std::vector<Complex> amps) {
  if (amps.empty()) throw InvalidDimension("state vector must have at least one amplitude");
  double n2 = 0.0;
  for (const auto& a : amps) n2 += std::norm(a);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw InvalidDimension("state vector has zero or non-finite norm");
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& a : amps) a *= scale;
  return StateVector(std::move(amps));
}

StateVector StateVector::basis(int dim, int index) {
  if (dim < 1 || index < 0 || index >= dim) {
    throw InvalidDimension("basis ket index out of range");
  }
  std::vector<Complex> amps(static_cast<std::size_t>(dim));
  amps[static_cast<std::size_t>(index)] = 1.0;
  return StateVector(std::move(amps));
}

double StateVector::norm_squared() const {
  double n2 = 0.0;
  for (const auto& a : amps_) n2 += std::norm(a);
  return n2;
}

Complex inner(const StateVector& u, const StateVector& v) {
  if (u.dim() != v.dim()) {
    throw DimensionMismatch("inner: dimensions " + std::to_string(u.dim()) + " and " + std::to_string(v.dim()));
  }
  Complex acc{};
  for (int k = 0; k < u.dim(); ++k) acc += std::conj(u[k]) * v[k];
  return acc;
}

MubTable build_mub_table(int d) {
  if (d < 2) throw InvalidDimension("MUB table: dimension must be >= 2");
  if (!is_odd_prime(d)) {
    throw UnsupportedDimension("MUB table: dimension " + std::to_string(d) + " is not an odd prime");
  }
  MubTable table;
  table.dim_ = d;
  const auto n = static_cast<std::size_t>(d);

  auto push = [&](std::vector<MubTable::Entry>& basis, std::vector<Complex> coeffs) {
    auto state = StateVector::normalized(coeffs);
    basis.push_back({std::move(coeffs), std::move(state)});
  };

  std::vector<MubTable::Entry> computational;
  for (int m = 0; m < d; ++m) {
    std::vector<Complex> c(n);
    c[static_cast<std::size_t>(m)] = 1.0;
    push(computational, std::move(c));
  }
  table.bases_.push_back(std::move(computational));

  if (d == 3) {
    for (const auto& rows : kTable3Phases) {
      std::vector<MubTable::Entry> basis;
      for (const auto& row : rows) {
        std::vector<Complex> c(n);
        for (std::size_t k = 0; k < n; ++k) c[k] = omega(3, row[k]);
        push(basis, std::move(c));
      }
      table.bases_.push_back(std::move(basis));
    }
    return table;
  }

  for (long long j = 0; j < d; ++j) {
    std::vector<MubTable::Entry> basis;
    for (long long m = 0; m < d; ++m) {
      std::vector<Complex> c(n);
      for (long long k = 0; k < d; ++k) c[static_cast<std::size_t>(k)] = omega(d, j * k * k + m * k);
      push(basis, std::move(c));
    }
    table.bases_.push_back(std::move(basis));
  }
  return table;
}

const MubTable::Entry& MubTable::entry(int mub, int index) const {
  if (mub < 1 || mub > basis_count() || index < 0 || index >= dim_) {
    throw InvalidDimension("MUB index out of range: basis " + std::to_string(mub) + ", state " +
                           std::to_string(index));
  }
  return bases_[static_cast<std::size_t>(mub - 1)][static_cast<std::size_t>(index)];
}

const StateVector& MubTable::state(int mub, int index) const { return entry(mub, index).state; }

std::span<const Complex> MubTable::coefficients(int mub, int index) const {
  return entry(mub, index).coefficients;
}

std::string MubTable::label(int mub, int index) const {
  entry(mub, index);
  std::string out;
  if (dim_ <= 26) {
    out += static_cast<char>('a' + index);
  } else {
    out += "s" + std::to_string(index) + "_";
  }
  return out + std::to_string(mub);
}

Projector make_projector(const MubTable& table, int mub_index) {
  Projector p;
  p.mub_index = mub_index;
  for (int i = 0; i < table.dim(); ++i) {
    p.recorded.push_back(table.state(mub_index, i));
    p.reference_labels.push_back("r" + std::to_string(i + 1));
  }
  return p;
}

std::vector<Complex> apply_projector(const Projector& p, const StateVector& input) {
  std::vector<Complex> out;
  out.reserve(p.recorded.size());
  for (const auto& r : p.recorded) out.push_back(inner(r, input));
  return out;
}

}  // namespace mubsort
