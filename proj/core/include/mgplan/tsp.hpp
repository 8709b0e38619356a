#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mgplan/weight_matrix.hpp"

namespace mgplan {

// Closed visiting order. Canonical form: order[0] == 0 and
// order[1] < order[M-1], which picks one representative per undirected cycle.
struct Tour {
  std::vector<std::size_t> order;

  friend bool operator==(const Tour&, const Tour&) = default;
  friend bool operator<(const Tour& a, const Tour& b) { return a.order < b.order; }
};

// Throws InvalidTour unless order is a permutation of 0..m-1.
void check_tour(const Tour& t, std::size_t m);

Tour canonical(const Tour& t);

// Sum of the M closing-cycle edges, accumulated in canonical order so the
// value is bitwise invariant under rotation and reversal.
double tour_cost(const WeightMatrix& w, const Tour& t);

struct TspResult {
  Tour tour;
  double cost = 0.0;
  enum class Method { Exact, Heuristic } method = Method::Exact;
};

std::string method_name(TspResult::Method m);

inline constexpr std::size_t kHeldKarpLimit = 16;

// Exact dynamic programme, 3 <= M <= 16. Among optimal tours returns the
// lexicographically smallest canonical one.
TspResult held_karp(const WeightMatrix& w);

// Greedy; ties go to the smaller index. Returned canonical.
Tour nearest_neighbor(const WeightMatrix& w, std::size_t start = 0);

struct LocalSearchStats {
  std::size_t two_opt_moves = 0;
  std::size_t or_opt_moves = 0;
  bool budget_exhausted = false;
};

// First-improvement 2-opt and Or-opt (segments of 1..3, either orientation),
// scanned in index order until no move improves or `budget` moves were
// applied. Never returns a costlier tour.
Tour local_search_improve(const WeightMatrix& w, const Tour& t, std::size_t budget = 100000,
                          LocalSearchStats* stats = nullptr);

struct TspConfig {
  std::size_t exact_limit = 13;        // M <= exact_limit uses Held-Karp
  std::size_t move_budget = 100000;    // per local search run
  bool multistart = true;              // nearest neighbour from every vertex
};

// M == 2 returns (0,1) with the edge counted out and back.
TspResult solve_tsp(const WeightMatrix& w, const TspConfig& config = {});

}  // namespace mgplan
