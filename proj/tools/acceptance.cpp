// Runs the acceptance suite with the default configuration (or a JSON config
// given as the first argument) and prints one line per criterion.
#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "spherecx/experiments.hpp"

using namespace spherecx;

int main(int argc, char** argv) {
  if (const char* t = std::getenv("SPHERECX_THREADS")) omp_set_num_threads(std::max(1, std::atoi(t)));
  try {
    auto cfg = ExperimentConfig::defaults();
    if (argc > 1) {
      std::ifstream in(argv[1]);
      if (!in) throw Error(ErrorCode::ConfigInvalid, std::string("cannot open ") + argv[1]);
      cfg = ExperimentConfig::from_json(nlohmann::json::parse(in));
    }
    if (argc > 2) cfg.out = argv[2];
    auto r = run_acceptance(cfg);
    for (const auto& c : r.results)
      std::cout << (c.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " -- " << c.summary
                << "\n";
    return write_reports(r);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
