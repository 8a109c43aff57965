// Temporary geometry sweep for the synthetic generator.
#include <cstdio>
#include <cstdlib>

#include "ttk/dataset.hpp"
#include "ttk/errors.hpp"

int main() {
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    try {
      auto p = ttk::make_synthetic_figure(seed);
      (void)p;
      ++ok;
    } catch (const ttk::ContractViolation&) {
    }
  }
  std::printf("accepted %d/12\n", ok);
  return 0;
}
