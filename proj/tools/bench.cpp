// Timing comparison of the OpenMP kernels against their serial references:
// thread enumeration by pushdown and the model automorphism search.
#include <chrono>
#include <iostream>

#include "invlim/invsys.hpp"
#include "invlim/model.hpp"

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

invlim::CayleyGroup cyclic(int n) {
  invlim::CayleyGroup g;
  g.names.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g.names.push_back(std::to_string(i));
  g.mul.assign(static_cast<std::size_t>(n), std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.mul[a][b] = (a + b) % n;
  g.identity = 0;
  return g;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::cout << name << ": serial " << serial_ms << " ms, parallel "
            << parallel_ms << " ms, speedup "
            << (parallel_ms > 0 ? serial_ms / parallel_ms : 0.0) << "x\n";
}

}  // namespace

int main() {
  {
    const invlim::InverseSystem sys = invlim::restriction_system(9);
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = invlim::enumerate_threads_serial(sys);
    const double serial_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = invlim::enumerate_threads(sys);
    const double parallel_ms = ms_since(t0);
    if (serial != parallel) {
      std::cerr << "thread enumeration kernels disagree\n";
      return 1;
    }
    std::cout << "threads(restriction 9) = " << serial.size() << "\n";
    report("enumerate_threads", serial_ms, parallel_ms);
  }
  {
    invlim::FiniteGroupSystem gs;
    gs.base = invlim::DirectedSet::chain(1);
    gs.groups.push_back(cyclic(96));
    std::vector<int> identity(96);
    for (int i = 0; i < 96; ++i) identity[static_cast<std::size_t>(i)] = i;
    gs.homs[invlim::FiniteGroupSystem::pair_key(0, 0)] = std::move(identity);
    const invlim::Structure m = invlim::build_model(std::move(gs));

    auto t0 = std::chrono::steady_clock::now();
    const auto serial = invlim::automorphisms_serial(m);
    const double serial_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = invlim::automorphisms(m);
    const double parallel_ms = ms_since(t0);
    if (serial != parallel) {
      std::cerr << "automorphism kernels disagree\n";
      return 1;
    }
    std::cout << "|Aut| over one cyclic block of order 96 = " << serial.size()
              << "\n";
    report("automorphisms", serial_ms, parallel_ms);
  }
  return 0;
}
