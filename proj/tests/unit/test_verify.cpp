#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "qheat/cli.hpp"
#include "qheat/error.hpp"
#include "qheat/verify.hpp"

using namespace qheat;

namespace {

const verify::Check& find(const std::vector<verify::Check>& checks, const std::string& id) {
  const auto it = std::find_if(checks.begin(), checks.end(), [&](const auto& c) { return c.id == id; });
  REQUIRE(it != checks.end());
  return *it;
}

// Analytic solver with corrupted population rates.
dynamics::AnalyticSolver mutated(void (*corrupt)(dynamics::PairRates&)) {
  return [corrupt](const dynamics::PairConfig& cfg, const BathSpec& bath, const std::vector<double>& grid) {
    dynamics::PairRates rates = dynamics::pair_population_rates(bath);
    corrupt(rates);
    return dynamics::analytic_pair_trajectory(cfg, rates, grid);
  };
}

}  // namespace

TEST_CASE("check ids are unique and cover every criterion") {
  const auto ids = verify::check_ids();
  CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == ids.size());
  const auto checks = verify::run({{"thermal-fixed-point", "alpha-c-bisection"}});
  REQUIRE(checks.size() == 2);
  CHECK(checks[0].criterion == 3);
  CHECK(checks[1].criterion == 6);
  CHECK(verify::all_pass(checks));
  CHECK(verify::criterion_pass(checks, 3));
  CHECK_FALSE(verify::criterion_pass(checks, 1));
}

TEST_CASE("unknown check id") {
  verify::Options opts;
  opts.only = {"no-such-check"};
  CHECK_THROWS_AS(verify::run(opts), InvalidInput);
}

TEST_CASE("table output") {
  const auto checks = verify::run({{"relent-identity"}});
  std::ostringstream os;
  verify::print_table(os, checks);
  CHECK(os.str().find("relent-identity") != std::string::npos);
  CHECK(os.str().find("PASS") != std::string::npos);
}

TEST_CASE("reference solver passes the cross-route checks") {
  const auto checks = verify::run({{"analytic-vs-ode", "pminus-conservation", "trace-conservation", "positivity"}});
  for (const auto& c : checks) {
    CHECK_MESSAGE(c.pass, c.id << " observed " << c.observed << " " << c.error);
  }
}

TEST_CASE("sign-flipped population rates are caught") {
  verify::Options opts;
  opts.only = {"analytic-vs-ode"};
  opts.analytic_solver = mutated([](dynamics::PairRates& r) {
    r.a_plus = -r.a_plus;
    r.a_minus = -r.a_minus;
  });
  const auto checks = verify::run(opts);
  CHECK_FALSE(find(checks, "analytic-vs-ode").pass);

  std::ostringstream out;
  std::ostringstream err;
  cli::Hooks hooks;
  hooks.analytic_solver = opts.analytic_solver;
  CHECK(cli::run({"verify", "--only", "analytic-vs-ode"}, out, err, hooks) == cli::kVerificationFailed);
  CHECK(out.str().find("verification FAILED") != std::string::npos);
}

TEST_CASE("swapped population rates are caught") {
  std::ostringstream out;
  std::ostringstream err;
  cli::Hooks hooks;
  hooks.analytic_solver = mutated([](dynamics::PairRates& r) { std::swap(r.a_plus, r.a_minus); });
  CHECK(cli::run({"verify", "--only", "analytic-vs-ode,pminus-conservation"}, out, err, hooks) ==
        cli::kVerificationFailed);
  CHECK(out.str().find("FAIL") != std::string::npos);
}
