#ifndef PERIMETER_ORACLE_H_
#define PERIMETER_ORACLE_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "perimeter/env.h"

namespace perimeter {

struct OracleOptions {
  int max_n = 20;
  // Cache hull pixel statistics by hull corner list, so subsets that differ
  // only by interior points are rasterized once.
  bool memoize = true;
  // Worker threads for subset evaluation; results do not depend on it.
  int threads = 1;
};

struct OracleResult {
  GameState best_state;
  Score best_value;
  HullMass best_mass;
  std::uint64_t evaluated = 0;

  friend bool operator==(const OracleResult&, const OracleResult&) = default;
};

// Evaluates every subset of the vertex set and returns the maximizer; ties go
// to the lexicographically smallest ascending id list. Throws RefusalError
// when N > options.max_n.
OracleResult EnumerateOptimal(const PerimeterEnv& env,
                              const OracleOptions& options = {});

struct SweepRow {
  Rational lambda;
  OracleResult result;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

// One oracle run per lambda with everything else in `base` held fixed.
std::vector<SweepRow> LambdaSweep(const EnvConfig& base,
                                  std::span<const Rational> lambdas,
                                  const OracleOptions& options = {});

// lambda_num,lambda_den,best_state,best_value_num,best_value_den,zero_pixels_enclosed
// best_state is space-separated.
void WriteSweepCsv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace perimeter

#endif  // PERIMETER_ORACLE_H_
