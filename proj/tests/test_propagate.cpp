#include <doctest.h>

#include <cmath>

#include "mubsort/error.hpp"
#include "mubsort/propagate.hpp"
#include "mubsort/sorter.hpp"

using namespace mubsort;

namespace {

constexpr double kOmega = 176.636362451064;  // sqrt(3) kappa2 / beta, default material
constexpr double kZAnalytic = 0.0088928253786367;

HologramSpec sorter(int mub = 4, bool degenerate = false, double delta_n = 0.0005) {
  SorterConfig cfg;
  cfg.mub_index = mub;
  cfg.degenerate_kz = degenerate;
  cfg.optical.material.delta_n = delta_n;
  return build_sorter(cfg, build_mub_table());
}

double max_rel(const ModeAmplitudes& a, const ModeAmplitudes& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("initial amplitudes") {
  const auto t = build_mub_table();
  const auto e = initial_amplitudes(t.state(4, 2));
  const double s = 1.0 / std::sqrt(3.0);
  const Complex z2 = omega(3, 2);
  CHECK(e.head<3>().isZero(0.0));
  CHECK(std::abs(e(3) - s) < 1e-15);
  CHECK(std::abs(e(4) - s * z2) < 1e-15);
  CHECK(std::abs(e(5) - s) < 1e-15);

  const auto a = initial_amplitudes(StateVector::basis(3, 0));
  CHECK(a(3) == Complex(1.0));
  CHECK(a.norm() == 1.0);

  const auto ones = initial_amplitudes(t.state(4, 2), true);
  CHECK(ones.head<3>() == Vector6c::Ones().head<3>());
  CHECK_THROWS_AS(initial_amplitudes(StateVector::basis(2, 0)), DimensionMismatch);

  const std::array<double, 3> rho{5.0, 6.0, 7.0};
  const std::array<double, 3> sigma{2.0, 3.0, 4.0};
  const auto c = initial_amplitudes(t.state(3, 1));
  CHECK(std::abs(flux(c, rho, sigma) - (2.0 + 3.0 + 4.0) / 3.0) < 1e-14);
}

TEST_CASE("flux and probabilities") {
  const std::array<double, 3> rho{5.0, 6.0, 7.0};
  const std::array<double, 3> sigma{2.0, 3.0, 4.0};
  CHECK(flux(ModeAmplitudes::Zero(), rho, sigma) == 0.0);
  ModeAmplitudes sa = ModeAmplitudes::Zero();
  sa(3) = 1.0;
  CHECK(flux(sa, rho, sigma) == 2.0);
  CHECK_THROWS_AS(probabilities(ModeAmplitudes::Zero(), rho, sigma), NumericalError);

  const std::array<double, 3> b{3.0, 3.0, 3.0};
  ModeAmplitudes r1 = ModeAmplitudes::Zero();
  r1(0) = 1.0;
  const auto p = probabilities(r1, b, b);
  CHECK(p == Probabilities{1.0, 0.0, 0.0, 0.0, 0.0, 0.0});

  ModeAmplitudes eq;
  eq << Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0.6, 0.8), Complex(0, -1), Complex(0.8, -0.6);
  for (double v : probabilities(eq, b, b)) CHECK(std::abs(v - 1.0 / 6.0) < 1e-15);

  ModeAmplitudes mixed;
  mixed << Complex(0.3, 0.1), Complex(-0.2, 0.5), Complex(0.0, 0.7), Complex(1.1, 0.0), Complex(0.4, -0.4),
      Complex(-0.9, 0.2);
  double sum = 0.0;
  for (double v : probabilities(mixed, rho, sigma)) sum += v;
  CHECK(std::abs(sum - 1.0) < 1e-15);
}

TEST_CASE("exact propagation basics") {
  const auto m = build_coupling_matrix(sorter());
  const ExactPropagator prop(m);
  CHECK(prop.uses_eigenbasis());
  const auto t = build_mub_table();
  const auto e = initial_amplitudes(t.state(2, 1));
  CHECK(max_rel(prop.apply(e, 0.0), e) < 1e-15);
  CHECK_THROWS_AS(prop.apply(e, -1e-3), InvalidSpec);

  const auto whole = propagate_expm(m, e, 0.007);
  const auto split = propagate_expm(m, propagate_expm(m, e, 0.003), 0.004);
  CHECK(max_rel(split, whole) < 1e-12);

  // independent series route
  for (double z : {0.001, 0.0089, 0.0177}) {
    CHECK((expm_series(m.entries, z) - prop.transfer(z)).cwiseAbs().maxCoeff() < 1e-12);
  }

  auto bad = m;
  bad.entries(0, 3) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(ExactPropagator{bad}, NumericalError);
}

TEST_CASE("series fallback without positive weights") {
  auto m = build_coupling_matrix(sorter());
  m.rho[0] = 0.0;
  const ExactPropagator prop(m);
  CHECK_FALSE(prop.uses_eigenbasis());
  const auto z = 0.005;
  CHECK((prop.transfer(z) - expm_series(m.entries, z)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matched state sorts into its reference") {
  const auto spec = sorter();
  const auto m = build_coupling_matrix(spec);
  const auto t = build_mub_table();
  const auto zr = find_zmax(spec);
  const auto p = probabilities(propagate_expm(m, initial_amplitudes(t.state(4, 0)), zr.per_state[0]), m);
  CHECK(p[0] >= 0.999);
  for (int k = 1; k < 6; ++k) CHECK(p[static_cast<std::size_t>(k)] <= 1e-3);
}

TEST_CASE("degenerate two-level closed form") {
  const auto spec = sorter(4, true);
  const auto m = build_coupling_matrix(spec);
  const double b = m.rho[0];
  CHECK(std::abs(std::sqrt(3.0) * m.kappa2 / b - kOmega) < 1e-10);
  CHECK(std::abs(analytic_zmax(spec.config) - kZAnalytic) < 1e-15);
  const ExactPropagator prop(m);
  for (int i = 0; i < 3; ++i) {
    const auto& psi = spec.gratings[static_cast<std::size_t>(i)].recorded_state;
    const auto e0 = initial_amplitudes(psi);
    const auto rk = propagate_rk4(m, e0, 2.0 * kZAnalytic, recommended_step(m));
    for (std::size_t k = 0; k < rk.z.size(); k += 97) {
      const double z = rk.z[k];
      ModeAmplitudes expect = ModeAmplitudes::Zero();
      expect(i) = Complex(0.0, std::sin(kOmega * z));
      for (int j = 0; j < 3; ++j) expect(3 + j) = std::cos(kOmega * z) * psi[j];
      CHECK((prop.apply(e0, z) - expect).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((rk.amplitudes[k] - expect).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("flux conservation and unitarity") {
  const auto t = build_mub_table();
  for (bool degenerate : {false, true}) {
    const auto m = build_coupling_matrix(sorter(4, degenerate));
    const ExactPropagator prop(m);
    for (int k = 0; k <= 40; ++k) {
      const double z = 2.0 * kZAnalytic * k / 40.0;
      const Matrix6c u = prop.flux_unitary(z);
      CHECK((u.adjoint() * u - Matrix6c::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    }
    for (int mub = 1; mub <= 4; ++mub) {
      for (int i = 0; i < 3; ++i) {
        const auto e0 = initial_amplitudes(t.state(mub, i));
        const double f0 = flux(e0, m);
        for (int k = 1; k <= 20; ++k) {
          const double z = 2.0 * kZAnalytic * k / 20.0;
          CHECK(std::abs(flux(prop.apply(e0, z), m) - f0) / f0 < 1e-12);
        }
        const auto rk = propagate_rk4(m, e0, 2.0 * kZAnalytic, recommended_step(m));
        double drift = 0.0;
        for (const auto& a : rk.amplitudes) drift = std::max(drift, std::abs(flux(a, m) - f0) / f0);
        CHECK(drift < 1e-9);
      }
    }
  }
}

TEST_CASE("rk4 against exact over a depth grid") {
  const auto t = build_mub_table();
  const auto m = build_coupling_matrix(sorter());
  const ExactPropagator prop(m);
  const double step = recommended_step(m);
  CHECK(step > 0.0);
  CHECK(step <= 3.14159 / (200.0 * kOmega));
  for (int mub = 1; mub <= 4; ++mub) {
    for (int i = 0; i < 3; ++i) {
      const auto e0 = initial_amplitudes(t.state(mub, i));
      const auto rk = propagate_rk4(m, e0, 2.0 * kZAnalytic, 2.0 * kZAnalytic / 2000.0);
      for (int k = 1; k <= 20; ++k) {
        const std::size_t idx = static_cast<std::size_t>(k) * 100;
        CHECK(max_rel(rk.amplitudes[idx], prop.apply(e0, rk.z[idx])) < 1e-8);
      }
    }
  }
}

TEST_CASE("rk4 with a 10 um step over the emulsion") {
  const auto t = build_mub_table();
  const auto m = build_coupling_matrix(sorter());
  const auto e0 = initial_amplitudes(t.state(3, 2));
  const auto rk = propagate_rk4(m, e0, 0.01, 10e-6);
  CHECK(rk.z.size() == 1001);
  CHECK(rk.z.front() == 0.0);
  CHECK(rk.z.back() == 0.01);
  for (std::size_t k = 1; k < rk.z.size(); ++k) CHECK(rk.z[k] > rk.z[k - 1]);
  CHECK(max_rel(rk.amplitudes.back(), propagate_expm(m, e0, 0.01)) < 1e-8);
  for (const auto& p : rk.probabilities) {
    double sum = 0.0;
    for (double v : p) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("rk4 edge cases") {
  const auto t = build_mub_table();
  const auto m = build_coupling_matrix(sorter());
  const auto e0 = initial_amplitudes(t.state(4, 1));
  CHECK_THROWS_AS(propagate_rk4(m, e0, 0.01, 0.0), InvalidSpec);
  CHECK_THROWS_AS(propagate_rk4(m, e0, 0.01, -1e-6), InvalidSpec);
  const auto single = propagate_rk4(m, e0, 1e-6, 1e-3);
  CHECK(single.z.size() == 2);
  CHECK(single.z.back() == 1e-6);

  const auto flat = build_coupling_matrix(sorter(4, false, 0.0));
  CHECK(std::isinf(recommended_step(flat)));
  const auto still = propagate_rk4(flat, e0, 0.01, 1e-4);
  for (const auto& a : still.amplitudes) CHECK(a == e0);
}

TEST_CASE("reversibility with the flux adjoint") {
  const auto t = build_mub_table();
  for (bool degenerate : {false, true}) {
    const auto m = build_coupling_matrix(sorter(3, degenerate));
    const auto back = flux_adjoint(m);
    CHECK((back.entries + m.entries).cwiseAbs().maxCoeff() < 1e-15 * m.kappa2);
    for (int mub = 1; mub <= 4; ++mub) {
      const auto e0 = initial_amplitudes(t.state(mub, 2));
      const auto there = propagate_expm(m, e0, 0.0123);
      const auto again = propagate_expm(back, there, 0.0123);
      CHECK((again - e0).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}
