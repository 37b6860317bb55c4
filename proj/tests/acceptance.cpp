// Acceptance gate: one PASS/FAIL line per criterion, then the detailed table.
// With a criterion number as argument only that criterion decides the exit code.

#include <cstdlib>
#include <iostream>
#include <string>

#include "qheat/verify.hpp"

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (only < 0 || only > 8) {
    std::cerr << "usage: qheat_acceptance [criterion 1-8]\n";
    return 2;
  }
  const auto checks = qheat::verify::run();
  bool ok = true;
  for (int c = 1; c <= 8; ++c) {
    const bool pass = qheat::verify::criterion_pass(checks, c);
    std::cout << "criterion " << c << ": " << (pass ? "PASS" : "FAIL") << '\n';
    if (only == 0 || only == c) ok = ok && pass;
  }
  std::cout << '\n';
  qheat::verify::print_table(std::cout, checks);
  return ok ? 0 : 1;
}
