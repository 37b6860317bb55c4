#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qheat/eigenops.hpp"
#include "qheat/error.hpp"
#include "qheat/pairtls.hpp"
#include "qheat/random.hpp"

using namespace qheat;
using doctest::Approx;

namespace {

HermitianObservable diag(std::initializer_list<double> values) {
  RVector v(static_cast<Eigen::Index>(values.size()));
  std::copy(values.begin(), values.end(), v.data());
  return HermitianObservable(v.cast<Complex>().asDiagonal().toDenseMatrix());
}

HermitianObservable collective_coupling() {
  const CMatrix& s = pair::collective_lowering();
  return HermitianObservable(s + s.adjoint());
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

}  // namespace

TEST_CASE("shells of the pair Hamiltonian") {
  const auto shells = spectral_groups(diag({0, 1, 1, 2}));
  REQUIRE(shells.size() == 3);
  CHECK(shells[0].energy == Approx(0.0));
  CHECK(shells[1].energy == Approx(1.0));
  CHECK(shells[2].energy == Approx(2.0));
  CHECK(shells[1].multiplicity == 2);
  CHECK(shells[1].basis.cols() == 2);
  CMatrix total = CMatrix::Zero(4, 4);
  for (const auto& s : shells) {
    CHECK(max_abs(s.projector * s.projector - s.projector) < 1e-14);
    total += s.projector;
  }
  CHECK(max_abs(total - identity(4)) < 1e-14);
}

TEST_CASE("near-degenerate eigenvalues share a shell") {
  CHECK(spectral_groups(diag({0, 1, 1 + 1e-12, 2})).size() == 3);
  CHECK(spectral_groups(diag({0, 1, 1 + 1e-6, 2})).size() == 4);
  CHECK(spectral_groups(diag({0, 1, 1 + 1e-6, 2}), 1e-5).size() == 3);
}

TEST_CASE("single two-level system") {
  const auto h = diag({0, 1});
  CMatrix sx = CMatrix::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  const auto map = build_eigenoperators(h, HermitianObservable(sx));
  REQUIRE(map.components().size() == 2);
  CHECK(map.positive_frequencies() == std::vector<double>{1.0});
  const CMatrix* a = map.find(1.0);
  REQUIRE(a != nullptr);
  CHECK(max_abs(*a - pair::local_lowering()) < 1e-14);
  CHECK(map.find(0.0) == nullptr);
}

TEST_CASE("collective coupling gives the collective ladder") {
  const auto map = build_eigenoperators(pair::hamiltonian(), collective_coupling());
  REQUIRE(map.components().size() == 2);
  CHECK(map.components()[0].frequency == Approx(-1.0));
  CHECK(map.components()[1].frequency == Approx(1.0));
  CHECK(max_abs(*map.find(1.0) - pair::collective_lowering()) < 1e-14);
  CHECK(max_abs(*map.find(-1.0) - pair::collective_lowering().adjoint()) < 1e-14);

  const LadderPair lp = infer_ladder_pair(pair::hamiltonian(), collective_coupling());
  CHECK(lp.frequency() == Approx(1.0));
  CHECK(max_abs(lp.lowering() - pair::collective_lowering()) < 1e-14);
  CHECK(max_abs(lp.up_weight() - lp.lowering() * lp.raising()) < 1e-14);
  CHECK(max_abs(lp.down_weight() - lp.raising() * lp.lowering()) < 1e-14);
}

TEST_CASE("a coupling commuting with H has only a zero-frequency part") {
  const auto h = pair::hamiltonian();
  const auto map = build_eigenoperators(h, h);
  REQUIRE(map.components().size() == 1);
  CHECK(map.components()[0].frequency == 0.0);
  CHECK(map.positive_frequencies().empty());
  CHECK_THROWS_AS(ladder_pair(h, h, 1.0), MultiFrequencyError);
}

TEST_CASE("V system has a rank-one lowering operator") {
  const auto h = diag({0, 1, 1});
  CMatrix v = CMatrix::Zero(3, 3);
  v(0, 1) = v(1, 0) = v(0, 2) = v(2, 0) = 1.0;
  const LadderPair lp = ladder_pair(h, HermitianObservable(v), 1.0);
  const RVector ev = hermitian_eigenvalues(lp.down_weight());
  CHECK(std::abs(ev(0)) < 1e-14);
  CHECK(std::abs(ev(1)) < 1e-14);
  CHECK(ev(2) == Approx(2.0));
}

TEST_CASE("detuned pair carries two transition frequencies") {
  const auto h = diag({0, 1, 1.5, 2.5});
  try {
    (void)infer_ladder_pair(h, collective_coupling());
    FAIL("expected MultiFrequencyError");
  } catch (const MultiFrequencyError& e) {
    REQUIRE(e.gaps().size() == 2);
    CHECK(e.gaps()[0] == Approx(1.0));
    CHECK(e.gaps()[1] == Approx(1.5));
  }
  CHECK_THROWS_AS(ladder_pair(h, collective_coupling(), 1.0), MultiFrequencyError);
}

TEST_CASE("zero coupling is rejected") {
  const HermitianObservable zero(CMatrix::Zero(4, 4));
  CHECK(build_eigenoperators(pair::hamiltonian(), zero).components().empty());
  CHECK_THROWS_AS(infer_ladder_pair(pair::hamiltonian(), zero), ZeroCouplingError);
  CHECK_THROWS_AS(ladder_pair(pair::hamiltonian(), zero, 1.0), ZeroCouplingError);
}

TEST_CASE("dimension mismatch is rejected") {
  CHECK_THROWS_AS(build_eigenoperators(diag({0, 1}), pair::hamiltonian()), DimensionError);
}

TEST_CASE("LadderPair verifies the commutation relation") {
  CHECK_THROWS_AS(LadderPair(pair::hamiltonian(), 1.0, pair::collective_lowering().adjoint()), InvalidInput);
  CHECK_THROWS_AS(LadderPair(pair::hamiltonian(), 2.0, pair::collective_lowering()), InvalidInput);
  CHECK_NOTHROW(LadderPair(pair::hamiltonian(), 1.0, pair::collective_lowering()));
}

TEST_CASE("eigenoperators reconstruct the coupling (random cases)") {
  random::Engine rng(23);
  for (int i = 0; i < 100; ++i) {
    const std::size_t dim = 2 + static_cast<std::size_t>(i % 4);
    // Half the cases get a degenerate spectrum.
    HermitianObservable h(random::hermitian(rng, dim));
    if (i % 2 == 0) {
      RVector e(static_cast<Eigen::Index>(dim));
      for (std::size_t k = 0; k < dim; ++k) e(static_cast<Eigen::Index>(k)) = static_cast<double>((k + 1) / 2);
      const CMatrix u = random::unitary(rng, dim);
      h = HermitianObservable(u * e.cast<Complex>().asDiagonal() * u.adjoint(), 1e-10);
    }
    const HermitianObservable x(random::hermitian(rng, dim));
    const auto map = build_eigenoperators(h, x);
    CHECK(max_abs(map.sum() - x.matrix()) < 1e-10);
    for (const auto& c : map.components()) {
      CHECK(max_abs(commutator(h.matrix(), c.op) + c.frequency * c.op) < 1e-9);
      const CMatrix* mirror = map.find(-c.frequency);
      REQUIRE(mirror != nullptr);
      CHECK(max_abs(*mirror - c.op.adjoint()) < 1e-12);
    }
  }
}

TEST_CASE("eigenoperators are basis independent") {
  random::Engine rng(29);
  const CMatrix u = random::unitary(rng, 4);
  const HermitianObservable h(u * pair::hamiltonian().matrix() * u.adjoint(), 1e-10);
  const HermitianObservable x(u * collective_coupling().matrix() * u.adjoint(), 1e-10);
  const LadderPair lp = infer_ladder_pair(h, x);
  CHECK(max_abs(lp.lowering() - u * pair::collective_lowering() * u.adjoint()) < 1e-10);
}
