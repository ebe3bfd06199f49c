// Prints the configuration-counting tables and the overlap-ratio trend.

#include <cstdio>

#include "spacetime/markov.hpp"

using namespace spacetime;

int main() {
  std::printf("valid configurations of bitonic blocks\n");
  std::printf("%4s %22s %10s\n", "ell", "a_ell", "bits");
  for (int ell = 1; ell <= 8; ++ell) {
    const CountInt a = count_bitonic(ell);
    std::printf("%4d %22s %10zu\n", ell,
                ell <= 6 ? a.to_decimal().c_str() : ("~2^" + std::to_string(a.bit_length())).c_str(),
                a.bit_length());
  }

  std::printf("\nlinear products a_ell^(x m) and circular wraps a_ell^(<-> m)\n");
  std::printf("%4s %4s %14s %14s\n", "ell", "m", "linear", "circular");
  for (int ell = 1; ell <= 3; ++ell)
    for (int m = 2; m <= 4; ++m)
      std::printf("%4d %4d %14s %14s\n", ell, m, count_product(ell, m).to_decimal().c_str(),
                  count_circular(ell, m).to_decimal().c_str());

  std::printf("\nconsecutive window overlap ratios a_{ell-1}^2 / a_ell\n");
  const double inv_phi = 2.0 / (1.0 + std::sqrt(5.0));
  for (int ell = 3; ell <= 10; ++ell) {
    const Rational r = overlap_ratio(ell, 1);
    std::printf("%4d  %-24s = %.6f   (1/phi = %.6f)\n", ell,
                ell <= 5 ? r.to_string().c_str() : "...", r.to_double(), inv_phi);
  }

  std::printf("\n(a_ell phi)^(1/2^ell) converging to omega = 1.8445...\n");
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int ell = 1; ell <= 12; ++ell)
    std::printf("%4d  %.6f\n", ell,
                std::exp2((count_bitonic(ell).log2() + std::log2(phi)) / std::exp2(ell)));
  return 0;
}
