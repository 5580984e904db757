#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace ltpg {

struct RunConfig {
  int p = 2, f = 2;
  std::vector<int64_t> unit_u;
  int N = 16, M = 64;
  int nmax = 2;
  int jet_order = 2;
  uint64_t seed = 7;
};

// One asserted identity.  Valuation checks pass when residual >= required;
// flag checks carry residual 1 or 0 and required = -1.
struct Check {
  std::string name;
  int residual = 0;
  int required = 0;
  int samples = 1;
  bool pass = false;
  bool flag() const { return required < 0; }
};

struct SuiteResult {
  std::string name;
  int p = 0, f = 0, N = 0, M = 0;
  bool pass = true;
  double seconds = 0;
  std::vector<Check> checks;
  nlohmann::json notes = nlohmann::json::object();
};

// Suites in acceptance order.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);
SuiteResult run_suite(const std::string& name, const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& c);
nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const SuiteResult& r);

}  // namespace ltpg
