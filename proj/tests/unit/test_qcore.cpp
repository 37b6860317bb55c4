#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>

#include "qheat/error.hpp"
#include "qheat/matrix_json.hpp"
#include "qheat/pairtls.hpp"
#include "qheat/qcore.hpp"
#include "qheat/random.hpp"

using namespace qheat;
using doctest::Approx;

namespace {

const std::array<std::size_t, 1> kFirst{0};
const std::array<std::size_t, 1> kSecond{1};

CMatrix bell_state() {
  CMatrix psi = CMatrix::Zero(4, 1);
  psi(0, 0) = psi(3, 0) = 1.0 / std::sqrt(2.0);
  return psi * psi.adjoint();
}

CMatrix pure_state(std::size_t dim, std::size_t k) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("partial trace of a product state returns the factors") {
  random::Engine rng(3);
  const DensityOperator a = random::density(rng, 2);
  const DensityOperator b = random::density(rng, 3);
  const DensityOperator ab(kron(a.matrix(), b.matrix()), {2, 3});
  CHECK(max_abs(partial_trace(ab, kFirst).matrix() - a.matrix()) < 1e-14);
  CHECK(max_abs(partial_trace(ab, kSecond).matrix() - b.matrix()) < 1e-14);
  const std::array<std::size_t, 2> both{1, 0};
  CHECK(max_abs(partial_trace(ab, both).matrix() - ab.matrix()) < 1e-15);
}

TEST_CASE("correlated pair has thermal marginals") {
  const double b = 3.5;
  const auto rho = pair::initial_state({b, {pair::alpha_max(b), 0.0}});
  const CMatrix tls = pair::thermal_tls(b);
  CHECK(max_abs(partial_trace(rho, kFirst).matrix() - tls) < 1e-15);
  CHECK(max_abs(partial_trace(rho, kSecond).matrix() - tls) < 1e-15);
}

TEST_CASE("Bell state has maximally mixed marginals") {
  const DensityOperator bell(bell_state(), {2, 2});
  CHECK(max_abs(partial_trace(bell, kFirst).matrix() - identity(2) / 2.0) < 1e-15);
  CHECK(std::abs(von_neumann_entropy(bell)) < 1e-12);
  CHECK(mutual_information(bell) == Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("partial trace rejects mismatched layouts") {
  const CMatrix m = identity(4) / 4.0;
  const Layout bad{3, 2};
  CHECK_THROWS_AS(partial_trace(m, bad, kFirst), DimensionError);
  const std::array<std::size_t, 1> out_of_range{2};
  CHECK_THROWS_AS(partial_trace(m, {2, 2}, out_of_range), DimensionError);
}

TEST_CASE("von Neumann entropy") {
  CHECK(std::abs(von_neumann_entropy(DensityOperator(pure_state(3, 1)))) < 1e-14);
  for (std::size_t d : {2u, 3u, 4u, 7u}) {
    const DensityOperator mixed(identity(d) / static_cast<double>(d));
    CHECK(von_neumann_entropy(mixed) == Approx(std::log(static_cast<double>(d))).epsilon(1e-14));
  }
  const auto rho = pair::initial_state({0.7, {pair::alpha_max(0.7), 0.0}});
  CHECK(von_neumann_entropy(rho) == Approx(0.963549910701557).epsilon(1e-12));
}

TEST_CASE("entropy is additive over tensor products") {
  random::Engine rng(11);
  for (int i = 0; i < 20; ++i) {
    const DensityOperator a = random::density(rng, 2);
    const DensityOperator b = random::density(rng, 3);
    const DensityOperator ab(kron(a.matrix(), b.matrix()), {2, 3});
    CHECK(von_neumann_entropy(ab) ==
          Approx(von_neumann_entropy(a) + von_neumann_entropy(b)).epsilon(1e-11));
    CHECK(std::abs(mutual_information(ab)) < 1e-11);
  }
}

TEST_CASE("relative entropy to a thermal state equals the free-energy form") {
  random::Engine rng(5);
  const double b = 1.3;
  const DensityOperator tau(kron(pair::thermal_tls(b), pair::thermal_tls(b)), pair::layout());
  const CMatrix& h = pair::hamiltonian().matrix();
  const double log_z = std::log(pair::partition(b));
  for (int i = 0; i < 50; ++i) {
    const DensityOperator rho = random::density(rng, 4, {2, 2});
    const double energy = trace_product(rho.matrix(), h).real();
    const double expected = b * energy + log_z - von_neumann_entropy(rho);
    CHECK(relative_entropy(rho, tau) == Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("relative entropy is non-negative and zero on the diagonal") {
  random::Engine rng(7);
  for (int i = 0; i < 1000; ++i) {
    const DensityOperator rho = random::density(rng, 3);
    const DensityOperator sigma = random::density(rng, 3);
    CHECK(relative_entropy(rho, sigma) >= -1e-12);
  }
  const DensityOperator rho = random::density(rng, 4);
  CHECK(std::abs(relative_entropy(rho, rho)) < 1e-11);
}

TEST_CASE("relative entropy is infinite outside the support") {
  const DensityOperator rho(identity(2) / 2.0);
  const DensityOperator sigma(pure_state(2, 0));
  CHECK(relative_entropy(rho, sigma) == std::numeric_limits<double>::infinity());
  CHECK(relative_entropy(sigma, rho) == Approx(std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(relative_entropy(rho, DensityOperator(identity(3) / 3.0)), DimensionError);
}

TEST_CASE("mutual information of the correlated pair") {
  const auto product = pair::initial_state({3.5, {0.0, 0.0}});
  CHECK(std::abs(mutual_information(product)) < 1e-13);
  const auto rho = pair::initial_state({3.5, {0.0284, 0.0}});
  CHECK(mutual_information(rho) == Approx(0.039021244779783).epsilon(1e-10));
  CHECK_THROWS_AS(mutual_information(DensityOperator(identity(4) / 4.0)), DimensionError);
}

TEST_CASE("validate_density reports each violated invariant") {
  CHECK(validate_density(identity(2) / 2.0).ok());

  const double b = 3.5;
  const double amax = pair::alpha_max(b);
  const CMatrix tau = kron(pair::thermal_tls(b), pair::thermal_tls(b));
  CMatrix edge = tau;
  edge(1, 2) = edge(2, 1) = amax;
  CHECK(validate_density(edge).ok());
  CMatrix over = tau;
  over(1, 2) = over(2, 1) = 1.01 * amax;
  const auto verdict = validate_density(over);
  CHECK_FALSE(verdict.ok());
  CHECK(verdict.min_eigenvalue == Approx(-0.01 * amax).epsilon(1e-9));
  CHECK_THROWS_AS(DensityOperator{over}, PositivityError);

  CMatrix unnormalized = identity(2);
  CHECK_FALSE(validate_density(unnormalized).ok());
  CHECK(validate_density(unnormalized).trace_defect == Approx(1.0));
  CMatrix skew = identity(2) / 2.0;
  skew(0, 1) = 0.1;
  CHECK_FALSE(validate_density(skew).ok());
  CHECK_THROWS_AS(DensityOperator{skew}, InvalidInput);

  CHECK_THROWS_AS(validate_density(CMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("observable and coherence wrappers validate their input") {
  CMatrix m = identity(2);
  m(0, 1) = Complex(0.0, 1.0);
  CHECK_THROWS_AS(HermitianObservable{m}, InvalidInput);
  m(1, 0) = Complex(0.0, -1.0);
  CHECK_NOTHROW(HermitianObservable{m});
  CHECK_THROWS_AS(CoherenceTerm{identity(2)}, InvalidInput);

  CMatrix local = CMatrix::Zero(4, 4);
  local(0, 0) = 0.1;
  local(3, 3) = -0.1;
  CHECK_THROWS_AS(CorrelationTerm(local, {2, 2}), InvalidInput);
  CHECK_NOTHROW(pair::correlation_term({0.01, 0.02}));
}

TEST_CASE("random correlation terms leave marginals untouched") {
  random::Engine rng(13);
  for (int i = 0; i < 20; ++i) {
    const CorrelationTerm chi = random::correlation(rng, {2, 3});
    CHECK(std::abs(chi.matrix().trace()) < 1e-14);
    CHECK(max_abs(partial_trace(chi.matrix(), chi.layout(), kFirst)) < 1e-14);
    CHECK(max_abs(partial_trace(chi.matrix(), chi.layout(), kSecond)) < 1e-14);
  }
}

TEST_CASE("kron and trace_product") {
  random::Engine rng(17);
  const CMatrix a = random::complex_matrix(rng, 2);
  const CMatrix b = random::complex_matrix(rng, 3);
  const CMatrix k = kron(a, b);
  CHECK(k.rows() == 6);
  CHECK(std::abs(k(4, 2) - a(1, 0) * b(1, 2)) < 1e-15);
  const CMatrix c = random::complex_matrix(rng, 6);
  CHECK(std::abs(trace_product(k, c) - (k * c).trace()) < 1e-13);
}

TEST_CASE("matrix JSON round trip") {
  random::Engine rng(19);
  const CMatrix m = random::complex_matrix(rng, 3);
  const CMatrix back = matrix_from_json_text(matrix_to_json_text(m));
  CHECK(back == m);
  const CMatrix real = matrix_from_json_text(R"({"dim": 2, "re": [[1, 2], [3, 4]]})");
  CHECK(real(1, 0) == Complex(3.0, 0.0));
  CHECK_THROWS_AS(matrix_from_json_text(R"({"dim": 2, "re": [[1, 2]]})"), InvalidInput);
  CHECK_THROWS_AS(matrix_from_json_text("not json"), InvalidInput);
}
