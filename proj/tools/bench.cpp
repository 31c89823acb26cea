// Benchmark: serial reference implementations vs the OpenMP kernels.  The
// classical row compares the exhaustive serial oracle (full decoding
// enumeration) against the factorized parallel kernel, so its ratio mixes the
// algorithmic and threading gains; the other rows rerun the same kernel with
// the pool capped to one thread via EACOMM_THREADS.

#include "eacomm/bounds.hpp"
#include "eacomm/dataio.hpp"
#include "eacomm/facets.hpp"
#include "eacomm/stats.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

namespace {

using clock_type = std::chrono::steady_clock;

double timed(const std::function<void()>& fn) {
  auto t0 = clock_type::now();
  fn();
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void report(const char* name, double serial, double parallel, double a,
            double b) {
  std::printf("%-42s reference %7.3f s   kernel %7.3f s   ratio %6.2fx %s\n",
              name, serial, parallel, serial / parallel,
              a == b ? "(results identical)" : "(RESULTS DIFFER!)");
}

}  // namespace

int main() {
  using namespace eacomm;
  std::printf("threads available: %d\n", max_threads());

  {  // classical enumeration: dedicated serial reference
    auto f = facets::builtin_facets()[2];
    double vs = 0.0, vp = 0.0;
    double ts = timed([&] { vs = facets::classical_bound_serial(f, 4).value; });
    double tp = timed([&] { vp = facets::classical_bound(f, 4).value; });
    report("classical bound d=4 (exhaustive vs kernel)", ts, tp, vs, vp);
  }

  {  // see-saw restarts: serialized by capping the thread pool
    auto eps = bounds::bundled_deviations();
    optim::SeeSawConfig cfg;
    cfg.restarts = 60;
    cfg.seed = 0;
    double vs = 0.0, vp = 0.0;
    setenv("EACOMM_THREADS", "1", 1);
    double ts =
        timed([&] { vs = bounds::corrected_upper_bound(eps, cfg).value; });
    unsetenv("EACOMM_THREADS");
    double tp =
        timed([&] { vp = bounds::corrected_upper_bound(eps, cfg).value; });
    report("corrected-bound see-saw (1 thread vs pool)", ts, tp, vs, vp);
  }

  {  // bootstrap resampling
    auto counts = dataio::counts_from_table(dataio::measured_correlations());
    auto frac = [](const stats::CountsTable& c) {
      double flag = double(c.counts[2][4][3] + c.counts[2][4][4]);
      double total = 0.0;
      for (int k = 0; k < 8; ++k) total += double(c.counts[2][4][k]);
      return flag / total;
    };
    double vs = 0.0, vp = 0.0;
    setenv("EACOMM_THREADS", "1", 1);
    double ts = timed(
        [&] { vs = stats::poisson_bootstrap(counts, frac, 4000, 0).sigma; });
    unsetenv("EACOMM_THREADS");
    double tp = timed(
        [&] { vp = stats::poisson_bootstrap(counts, frac, 4000, 0).sigma; });
    report("poisson bootstrap x4000 (1 thread vs pool)", ts, tp, vs, vp);
  }
  return 0;
}
