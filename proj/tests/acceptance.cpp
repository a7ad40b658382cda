// Acceptance runner: one pass/fail line per criterion.  Exit status is the
// number of failed criteria, so it doubles as a scripting-friendly gate.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "fichera/acceptance.hpp"

int main(int argc, char** argv) {
  int only = 0;
  bool quick = false;
  std::string cache_dir = "acceptance-cache";
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (a == "--quick") {
      quick = true;
    } else if (a == "--cache-dir" && i + 1 < argc) {
      cache_dir = argv[++i];
    } else {
      std::fprintf(
          stderr,
          "usage: acceptance [--criterion N] [--quick] [--cache-dir DIR]\n");
      return 1;
    }
  }
  fichera::AcceptanceConfig cfg;
  cfg.quick = quick;
  cfg.cache = fichera::SolveCache(cache_dir);

  int failures = 0;
  for (int id = 1; id <= fichera::kNumCriteria; ++id) {
    if (only != 0 && id != only) continue;
    fichera::CriterionResult r;
    try {
      r = fichera::run_criterion(id, cfg);
    } catch (const std::exception& e) {
      r.id = id;
      r.name = std::string("exception: ") + e.what();
      r.pass = false;
    }
    std::printf("criterion %02d [%s] %s\n", id, r.pass ? "PASS" : "FAIL",
                r.name.c_str());
    if (!r.pass && !r.details.is_null())
      std::printf("%s\n", r.details.dump(2).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  return failures;
}
