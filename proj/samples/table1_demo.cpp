// Prints the six labelled spin-3/2 coherent states with their zeta and Bloch
// vectors, then the Husimi maximum of |zeta(pi/2, 0)>.

#include <algorithm>
#include <iostream>

#include "spincs/spincs.hpp"

int main() {
  using namespace spincs;
  const SpinValue spin(3);
  std::cout << to_csv(table1(spin));

  const auto grid = husimi_grid(32, 64);
  const auto q = husimi_q(build_coherent_state(spin, CoherentAngles{kPi / 2, 0.0}), spin, grid);
  const auto k = std::max_element(q.begin(), q.end()) - q.begin();
  std::cout << "husimi max at theta=" << format_number(grid[k].theta) << " phi=" << format_number(grid[k].phi)
            << " q=" << format_number(q[k]) << "\n";
}
