// Parallel vs serial timings for the coverage table and the enumerator.
#include <chrono>
#include <iostream>
#include <random>

#include "dsr/coverage.hpp"
#include "dsr/enumerator.hpp"
#include "dsr/scenario.hpp"

using namespace dsr;

namespace {

template <class F>
double best_ms(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> pos(0, 1000), rad(50, 250);
  CoverageInput in;
  for (int v = 0; v < 16; ++v) in.radius.push_back(rad(rng));
  for (int k = 0; k < 400; ++k) {
    in.site_x.push_back(pos(rng));
    in.site_y.push_back(pos(rng));
  }
  for (int c = 0; c < 2000; ++c) {
    in.ftu_x.push_back(pos(rng));
    in.ftu_y.push_back(pos(rng));
  }
  const bool same = coverage_table(in) == coverage_table_serial(in);
  const double par = best_ms([&] { (void)coverage_table(in); }, 5);
  const double ser = best_ms([&] { (void)coverage_table_serial(in); }, 5);
  std::cout << "coverage 16x400x2000: parallel " << par << " ms, serial " << ser << " ms, speedup " << ser / par
            << (same ? "" : "  MISMATCH") << "\n";

  if (argc > 1) {
    const Scenario sc = load_scenario(argv[1]);
    const Instance inst = make_instance(sc, Variant::WCA);
    EnumOptions p, s;
    s.parallel = false;
    EnumResult rp, rs;
    const double tp = best_ms([&] { rp = enumerate_optimal(inst, p); }, 3);
    const double ts = best_ms([&] { rs = enumerate_optimal(inst, s); }, 3);
    std::cout << "enumerator " << argv[1] << ": parallel " << tp << " ms, serial " << ts << " ms, speedup " << ts / tp
              << (rp.plan == rs.plan && rp.report.obj_sum == rs.report.obj_sum ? "" : "  MISMATCH") << "\n";
  }
  return same ? 0 : 1;
}
