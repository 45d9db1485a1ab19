#include "perimeter/oracle.h"

#include <algorithm>
#include <optional>
#include <thread>
#include <unordered_map>

#include "perimeter/errors.h"

namespace perimeter {
namespace {

struct RingHash {
  std::size_t operator()(const std::vector<Point>& ring) const {
    std::uint64_t h = 1469598103934665603ull;
    for (const Point& p : ring) {
      h = (h ^ static_cast<std::uint64_t>(p.x)) * 1099511628211ull;
      h = (h ^ static_cast<std::uint64_t>(p.y)) * 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

struct Candidate {
  std::uint64_t mask = 0;
  Score value;
  HullMass mass;
};

// Lexicographic order on ascending id lists, read straight off masks.
bool MaskLess(std::uint64_t a, std::uint64_t b) {
  while (a != 0 && b != 0) {
    const int low_a = __builtin_ctzll(a);
    const int low_b = __builtin_ctzll(b);
    if (low_a != low_b) return low_a < low_b;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

bool Better(const Candidate& c, const std::optional<Candidate>& best) {
  if (!best) return true;
  if (c.value != best->value) return c.value > best->value;
  return MaskLess(c.mask, best->mask);
}

std::optional<Candidate> ScanRange(const PerimeterEnv& env, std::uint64_t begin,
                                   std::uint64_t end, bool memoize) {
  const int n = env.num_vertices();
  const auto vertices = env.config().vertices.all();
  std::unordered_map<std::vector<Point>, HullMass, RingHash> memo;
  std::optional<Candidate> best;
  std::vector<Point> points;
  points.reserve(n);
  for (std::uint64_t mask = begin; mask < end; ++mask) {
    points.clear();
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1) points.push_back(vertices[i].point());
    }
    const Hull hull = ConvexHull(points);
    HullMass mass;
    if (hull.degenerate) {
      // Zero-area hulls enclose nothing.
    } else if (memoize) {
      auto it = memo.find(hull.vertices);
      if (it == memo.end()) it = memo.emplace(hull.vertices, env.MassOf(hull)).first;
      mass = it->second;
    } else {
      mass = env.MassOf(hull);
    }
    Candidate candidate{mask, env.ValueOfMass(mass), mass};
    if (Better(candidate, best)) best = std::move(candidate);
  }
  return best;
}

}  // namespace

OracleResult EnumerateOptimal(const PerimeterEnv& env, const OracleOptions& options) {
  const int n = env.num_vertices();
  const int cap = std::min(options.max_n, 62);
  if (n > cap) {
    throw RefusalError("oracle refuses N = " + std::to_string(n) +
                       " vertices: exhaustive search costs 2^" +
                       std::to_string(n) + " subset evaluations (limit N <= " +
                       std::to_string(cap) + ")");
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  const int threads = static_cast<int>(
      std::clamp<std::uint64_t>(options.threads, 1, std::max<std::uint64_t>(1, total / 1024)));
  std::vector<std::optional<Candidate>> partial(threads);
  if (threads == 1) {
    partial[0] = ScanRange(env, 0, total, options.memoize);
  } else {
    std::vector<std::thread> workers;
    for (int t = 0; t < threads; ++t) {
      const std::uint64_t begin = total * t / threads;
      const std::uint64_t end = total * (t + 1) / threads;
      workers.emplace_back([&, t, begin, end] {
        partial[t] = ScanRange(env, begin, end, options.memoize);
      });
    }
    for (auto& w : workers) w.join();
  }
  std::optional<Candidate> best;
  for (auto& p : partial) {
    if (p && Better(*p, best)) best = std::move(p);
  }
  return {GameState::FromMask(best->mask), best->value, best->mass, total};
}

std::vector<SweepRow> LambdaSweep(const EnvConfig& base,
                                  std::span<const Rational> lambdas,
                                  const OracleOptions& options) {
  std::vector<SweepRow> rows;
  rows.reserve(lambdas.size());
  for (const Rational& lambda : lambdas) {
    EnvConfig config = base;
    config.lambda = lambda;
    const PerimeterEnv env(std::move(config));
    rows.push_back({lambda, EnumerateOptimal(env, options)});
  }
  return rows;
}

void WriteSweepCsv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "lambda_num,lambda_den,best_state,best_value_num,best_value_den,"
         "zero_pixels_enclosed\n";
  for (const SweepRow& row : rows) {
    out << row.lambda.numerator() << ',' << row.lambda.denominator() << ','
        << row.result.best_state.Serialize(' ') << ','
        << row.result.best_value.numerator() << ','
        << row.result.best_value.denominator() << ','
        << row.result.best_mass.zero_pixels << '\n';
  }
}

}  // namespace perimeter
