#include "mgplan/tsp.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "mgplan/errors.hpp"

namespace mgplan {

void check_tour(const Tour& t, std::size_t m) {
  if (t.order.size() != m) {
    throw InvalidTour("tour has " + std::to_string(t.order.size()) + " vertices, expected " + std::to_string(m));
  }
  std::vector<char> seen(m, 0);
  for (std::size_t v : t.order) {
    if (v >= m) throw InvalidTour("vertex " + std::to_string(v) + " out of range");
    if (seen[v]) throw InvalidTour("vertex " + std::to_string(v) + " visited twice");
    seen[v] = 1;
  }
}

Tour canonical(const Tour& t) {
  Tour out = t;
  auto& o = out.order;
  if (o.size() < 2) return out;
  const auto zero = std::min_element(o.begin(), o.end());
  std::rotate(o.begin(), zero, o.end());
  if (o.size() > 2 && o[1] > o.back()) std::reverse(o.begin() + 1, o.end());
  return out;
}

double tour_cost(const WeightMatrix& w, const Tour& t) {
  check_tour(t, w.size());
  const Tour c = canonical(t);
  const std::size_t m = c.order.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) sum += w(c.order[k], c.order[(k + 1) % m]);
  return sum;
}

std::string method_name(TspResult::Method m) { return m == TspResult::Method::Exact ? "EXACT" : "HEURISTIC"; }

TspResult held_karp(const WeightMatrix& w) {
  const std::size_t m = w.size();
  if (m > kHeldKarpLimit) throw TooLarge("held_karp supports at most 16 goals, got " + std::to_string(m));
  if (m < 3) throw InvalidArgument("held_karp needs at least 3 goals");
  w.validate();

  // Vertices 1..m-1 map to bits 0..k-1. rest[S][j]: cheapest way to start at
  // j (a member of S), visit every vertex outside S and return to 0.
  const std::size_t k = m - 1;
  const std::size_t full = (std::size_t{1} << k) - 1;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> rest((full + 1) * k, kInf);
  auto at = [&](std::size_t s, std::size_t v) -> double& { return rest[s * k + (v - 1)]; };

  for (std::size_t v = 1; v < m; ++v) at(full, v) = w(v, 0);
  for (std::size_t s = full; s-- > 1;) {
    for (std::size_t j = 1; j < m; ++j) {
      if (!(s >> (j - 1) & 1)) continue;
      double best = kInf;
      for (std::size_t v = 1; v < m; ++v) {
        if (s >> (v - 1) & 1) continue;
        best = std::min(best, w(j, v) + at(s | std::size_t{1} << (v - 1), v));
      }
      at(s, j) = best;
    }
  }

  double opt = kInf;
  for (std::size_t v = 1; v < m; ++v) opt = std::min(opt, w(0, v) + at(std::size_t{1} << (v - 1), v));

  // Walk forward taking the smallest vertex that still attains the optimum.
  Tour tour;
  tour.order.push_back(0);
  std::size_t s = 0, cur = 0;
  double target = opt;
  while (tour.order.size() < m) {
    for (std::size_t v = 1; v < m; ++v) {
      if (s >> (v - 1) & 1) continue;
      const std::size_t next = s | std::size_t{1} << (v - 1);
      if (w(cur, v) + at(next, v) == target) {
        tour.order.push_back(v);
        s = next;
        cur = v;
        target = at(s, v);
        break;
      }
    }
  }
  TspResult r;
  r.tour = canonical(tour);
  r.cost = tour_cost(w, r.tour);
  r.method = TspResult::Method::Exact;
  return r;
}

Tour nearest_neighbor(const WeightMatrix& w, std::size_t start) {
  w.validate();
  const std::size_t m = w.size();
  if (start >= m) throw InvalidArgument("start vertex out of range");
  std::vector<char> used(m, 0);
  Tour t;
  t.order.push_back(start);
  used[start] = 1;
  std::size_t cur = start;
  while (t.order.size() < m) {
    std::size_t pick = m;
    for (std::size_t v = 0; v < m; ++v) {
      if (used[v]) continue;
      if (pick == m || w(cur, v) < w(cur, pick)) pick = v;
    }
    t.order.push_back(pick);
    used[pick] = 1;
    cur = pick;
  }
  return canonical(t);
}

namespace {

bool try_two_opt(const WeightMatrix& w, std::vector<std::size_t>& t, double tol) {
  const std::size_t m = t.size();
  for (std::size_t i = 0; i + 2 < m; ++i) {
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      const std::size_t a = t[i], b = t[i + 1], c = t[j], d = t[(j + 1) % m];
      const double delta = w(a, c) + w(b, d) - w(a, b) - w(c, d);
      if (delta < -tol) {
        std::reverse(t.begin() + static_cast<std::ptrdiff_t>(i + 1), t.begin() + static_cast<std::ptrdiff_t>(j + 1));
        return true;
      }
    }
  }
  return false;
}

bool try_or_opt(const WeightMatrix& w, std::vector<std::size_t>& t, double tol) {
  const std::size_t m = t.size();
  for (std::size_t len = 1; len <= 3 && len + 2 <= m; ++len) {
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t prev = t[(i + m - 1) % m];
      const std::size_t first = t[i];
      const std::size_t last = t[(i + len - 1) % m];
      const std::size_t next = t[(i + len) % m];
      const double removed = w(prev, first) + w(last, next) - w(prev, next);
      // Remaining vertices in tour order from `next` round to `prev`.
      std::vector<std::size_t> rest;
      rest.reserve(m - len);
      for (std::size_t k = 0; k < m - len; ++k) rest.push_back(t[(i + len + k) % m]);
      for (std::size_t k = 0; k + 1 < rest.size(); ++k) {
        const std::size_t u = rest[k], v = rest[k + 1];
        for (int reversed = 0; reversed < (len > 1 ? 2 : 1); ++reversed) {
          const std::size_t head = reversed ? last : first;
          const std::size_t tail = reversed ? first : last;
          const double added = w(u, head) + w(tail, v) - w(u, v);
          if (added - removed < -tol) {
            std::vector<std::size_t> seg;
            for (std::size_t s = 0; s < len; ++s) seg.push_back(t[(i + s) % m]);
            if (reversed) std::reverse(seg.begin(), seg.end());
            std::vector<std::size_t> out(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(k + 1));
            out.insert(out.end(), seg.begin(), seg.end());
            out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(k + 1), rest.end());
            t = std::move(out);
            return true;
          }
        }
      }
    }
  }
  return false;
}

}  // namespace

Tour local_search_improve(const WeightMatrix& w, const Tour& start, std::size_t budget, LocalSearchStats* stats) {
  w.validate();
  check_tour(start, w.size());
  const double start_cost = tour_cost(w, start);
  const double tol = 1e-12 * std::max(1.0, start_cost);
  LocalSearchStats local;
  std::vector<std::size_t> t = canonical(start).order;
  std::size_t moves = 0;
  while (t.size() >= 4) {
    if (moves >= budget) {
      local.budget_exhausted = true;
      break;
    }
    if (try_two_opt(w, t, tol)) {
      ++local.two_opt_moves;
    } else if (try_or_opt(w, t, tol)) {
      ++local.or_opt_moves;
    } else {
      break;
    }
    ++moves;
  }
  if (stats) *stats = local;
  Tour out = canonical(Tour{t});
  if (tour_cost(w, out) > start_cost) return canonical(start);
  return out;
}

TspResult solve_tsp(const WeightMatrix& w, const TspConfig& config) {
  w.validate();
  const std::size_t m = w.size();
  if (m < 2) throw InvalidArgument("need at least 2 goals to order");
  TspResult r;
  if (m == 2) {
    r.tour.order = {0, 1};
    r.cost = tour_cost(w, r.tour);
    r.method = TspResult::Method::Exact;
    return r;
  }
  if (m <= std::min(config.exact_limit, kHeldKarpLimit)) return held_karp(w);

  const std::size_t starts = config.multistart ? m : 1;
  bool have = false;
  for (std::size_t s = 0; s < starts; ++s) {
    const Tour t = local_search_improve(w, nearest_neighbor(w, s), config.move_budget);
    const double c = tour_cost(w, t);
    if (!have || c < r.cost || (c == r.cost && t < r.tour)) {
      r.tour = t;
      r.cost = c;
      have = true;
    }
  }
  r.method = TspResult::Method::Heuristic;
  return r;
}

}  // namespace mgplan
