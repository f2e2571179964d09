#include "soc/routing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "soc/errors.hpp"

namespace soc {

CostMatrix cost_matrix_from_coverage(const CoverageSolution& cov) {
  const std::size_t n = cov.n_targets();
  CostMatrix C(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double best = kInf;
      for (auto p : cov.targets[i].target_cells)
        best = std::min(best, cov.targets[j].value(p));
      C.at(static_cast<int>(i + 1), static_cast<int>(j + 1)) = best;
    }
  }
  return C;
}

CostMatrix cost_matrix_from_state_subset(const CoverageSolution& cov, std::uint32_t x0_cell,
                                         std::span<const int> active) {
  if (active.empty() || active[0] != 1)
    throw validation_error("cost matrix: active target list must start with the depot");
  if (!std::isfinite(cov.targets[0].value(x0_cell)))
    throw infeasible_error("initial state has infinite value for the depot target");
  const std::size_t n = active.size();
  CostMatrix C(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t gi = static_cast<std::size_t>(active[i]) - 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::size_t gj = static_cast<std::size_t>(active[j]) - 1;
      if (i == 0) {
        C.at(1, static_cast<int>(j + 1)) = cov.targets[gj].value(x0_cell);
      } else {
        double best = kInf;
        for (auto p : cov.targets[gi].target_cells)
          best = std::min(best, cov.targets[gj].value(p));
        C.at(static_cast<int>(i + 1), static_cast<int>(j + 1)) = best;
      }
    }
  }
  return C;
}

CostMatrix cost_matrix_from_state(const CoverageSolution& cov, std::uint32_t x0_cell) {
  std::vector<int> all(cov.n_targets());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i + 1);
  return cost_matrix_from_state_subset(cov, x0_cell, all);
}

double plan_cost(const CostMatrix& C, const TourPlan& plan) {
  double total = 0;
  for (const auto& t : plan.tours)
    for (std::size_t i = 1; i < t.seq.size(); ++i) total += C.at(t.seq[i - 1], t.seq[i]);
  return total;
}

bool plan_feasible(const TourPlan& plan, std::size_t n, int capacity,
                   std::optional<int> num_vehicles) {
  std::vector<int> seen(n + 1, 0);
  for (const auto& t : plan.tours) {
    if (t.seq.size() < 3) return false;
    if (t.seq.front() != 1 || t.seq.back() != 1) return false;
    if (static_cast<int>(t.customers()) > capacity) return false;
    for (std::size_t i = 1; i + 1 < t.seq.size(); ++i) {
      const int c = t.seq[i];
      if (c < 2 || c > static_cast<int>(n)) return false;
      if (seen[c]++) return false;
    }
  }
  for (std::size_t c = 2; c <= n; ++c)
    if (seen[c] != 1) return false;
  if (num_vehicles && static_cast<int>(plan.tours.size()) != *num_vehicles) return false;
  return true;
}

namespace {

/* Held-Karp table: D[T][j] = min cost from customer j through the set T,
 * then back to the depot. Customers are bits 0..k-1 for targets 2..k+1. */
struct HeldKarp {
  const CostMatrix& C;
  int k;  // number of customers
  std::vector<std::vector<double>> D;

  explicit HeldKarp(const CostMatrix& C_) : C(C_), k(static_cast<int>(C_.n) - 1) {
    const std::size_t masks = std::size_t(1) << k;
    D.assign(masks, std::vector<double>(static_cast<std::size_t>(k), kInf));
    for (int j = 0; j < k; ++j) D[0][static_cast<std::size_t>(j)] = C.at(j + 2, 1);
    for (std::size_t T = 1; T < masks; ++T) {
      for (int j = 0; j < k; ++j) {
        if (T & (std::size_t(1) << j)) continue;  // j not yet visited
        double best = kInf;
        for (int x = 0; x < k; ++x) {
          if (!(T & (std::size_t(1) << x))) continue;
          const double v = C.at(j + 2, x + 2) + D[T ^ (std::size_t(1) << x)][static_cast<std::size_t>(x)];
          if (v < best) best = v;
        }
        D[T][static_cast<std::size_t>(j)] = best;
      }
    }
  }

  /* optimal depot-to-depot cost over customer set S */
  double tour_cost(std::size_t S) const {
    double best = kInf;
    for (int c = 0; c < k; ++c) {
      if (!(S & (std::size_t(1) << c))) continue;
      const double v = C.at(1, c + 2) + D[S ^ (std::size_t(1) << c)][static_cast<std::size_t>(c)];
      if (v < best) best = v;
    }
    return best;
  }

  /* Lexicographically smallest optimal visiting order for S. The running
   * optimum is carried as a table value, never as a difference, so the
   * minimizer is matched by exact floating-point equality. */
  std::vector<int> tour_seq(std::size_t S) const {
    std::vector<int> seq{1};
    double cur = tour_cost(S);
    int from = 1;  // depot
    std::size_t T = S;
    while (T) {
      for (int c = 0; c < k; ++c) {
        if (!(T & (std::size_t(1) << c))) continue;
        const std::size_t rest = T ^ (std::size_t(1) << c);
        const double via = C.at(from, c + 2) + D[rest][static_cast<std::size_t>(c)];
        if (via == cur) {
          seq.push_back(c + 2);
          cur = D[rest][static_cast<std::size_t>(c)];
          from = c + 2;
          T = rest;
          break;
        }
      }
    }
    seq.push_back(1);
    return seq;
  }
};

void canonicalize(TourPlan& plan) {
  std::sort(plan.tours.begin(), plan.tours.end(),
            [](const Tour& a, const Tour& b) { return a.seq < b.seq; });
}

TourPlan exact_cvrp(const CostMatrix& C, int capacity, std::optional<int> num_vehicles) {
  const int k = static_cast<int>(C.n) - 1;
  const std::size_t masks = std::size_t(1) << k;
  HeldKarp hk(C);

  std::vector<double> tcost(masks, kInf);
  for (std::size_t S = 1; S < masks; ++S)
    if (static_cast<int>(std::popcount(S)) <= capacity) tcost[S] = hk.tour_cost(S);

  const std::size_t full = masks - 1;
  // P[mask][v] = best cost splitting mask into exactly v tours (v index
  // capped at k); without a vehicle constraint, collapse v to 0.
  const int nv = num_vehicles ? *num_vehicles : 0;
  const std::size_t vdim = num_vehicles ? static_cast<std::size_t>(nv) + 1 : 1;
  std::vector<std::vector<double>> P(masks, std::vector<double>(vdim, kInf));
  P[0][0] = 0;
  for (std::size_t mask = 1; mask < masks; ++mask) {
    const std::size_t low = mask & (~mask + 1);
    for (std::size_t S = mask;; S = (S - 1) & mask) {
      if ((S & low) && std::isfinite(tcost[S])) {
        const std::size_t rest = mask ^ S;
        if (num_vehicles) {
          for (std::size_t v = 1; v < vdim; ++v) {
            if (!std::isfinite(P[rest][v - 1])) continue;
            const double val = tcost[S] + P[rest][v - 1];
            if (val < P[mask][v]) P[mask][v] = val;
          }
        } else {
          if (std::isfinite(P[rest][0])) {
            const double val = tcost[S] + P[rest][0];
            if (val < P[mask][0]) P[mask][0] = val;
          }
        }
      }
      if (S == 0) break;
    }
  }

  const std::size_t vfinal = num_vehicles ? static_cast<std::size_t>(nv) : 0;
  if (!std::isfinite(P[full][vfinal]))
    throw infeasible_error("cvrp: no feasible tour partition for the given capacity/vehicles");

  // reconstruct; ties resolved toward the lexicographically smallest tour
  TourPlan plan;
  plan.certified = true;
  std::size_t mask = full;
  std::size_t v = vfinal;
  while (mask) {
    const std::size_t low = mask & (~mask + 1);
    const double want = P[mask][v];
    double bestval = kInf;
    std::vector<int> bestseq;
    std::size_t bestS = 0;
    for (std::size_t S = mask;; S = (S - 1) & mask) {
      if ((S & low) && std::isfinite(tcost[S])) {
        const std::size_t rest = mask ^ S;
        const double prev = num_vehicles ? (v >= 1 ? P[rest][v - 1] : kInf) : P[rest][0];
        if (std::isfinite(prev)) {
          const double val = tcost[S] + prev;
          if (val == want) {  // the DP minimum is attained bitwise by some S
            auto seq = hk.tour_seq(S);
            if (val < bestval || (val == bestval && seq < bestseq)) {
              bestval = val;
              bestseq = std::move(seq);
              bestS = S;
            }
          }
        }
      }
      if (S == 0) break;
    }
    plan.tours.push_back(Tour{std::move(bestseq)});
    mask ^= bestS;
    if (num_vehicles) --v;
  }
  canonicalize(plan);
  plan.total_cost = plan_cost(C, plan);
  return plan;
}

double tour_cost_of(const CostMatrix& C, const std::vector<int>& seq) {
  double t = 0;
  for (std::size_t i = 1; i < seq.size(); ++i) t += C.at(seq[i - 1], seq[i]);
  return t;
}

TourPlan heuristic_cvrp(const CostMatrix& C, int capacity, std::optional<int> num_vehicles) {
  const int n = static_cast<int>(C.n);
  std::vector<std::vector<int>> tours;  // interior customer sequences
  for (int c = 2; c <= n; ++c) tours.push_back({c});

  struct Saving {
    double s;
    int i, j;
  };
  std::vector<Saving> savings;
  for (int i = 2; i <= n; ++i)
    for (int j = 2; j <= n; ++j) {
      if (i == j) continue;
      savings.push_back({C.at(i, 1) + C.at(1, j) - C.at(i, j), i, j});
    }
  std::sort(savings.begin(), savings.end(), [](const Saving& a, const Saving& b) {
    if (a.s != b.s) return a.s > b.s;
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });

  auto find_tour = [&](int c, bool at_end) -> int {
    for (std::size_t t = 0; t < tours.size(); ++t)
      if ((at_end && tours[t].back() == c) || (!at_end && tours[t].front() == c))
        return static_cast<int>(t);
    return -1;
  };
  for (const auto& sv : savings) {
    if (sv.s <= 0 && !num_vehicles) break;
    const int ta = find_tour(sv.i, true);
    const int tb = find_tour(sv.j, false);
    if (ta < 0 || tb < 0 || ta == tb) continue;
    if (static_cast<int>(tours[ta].size() + tours[tb].size()) > capacity) continue;
    tours[ta].insert(tours[ta].end(), tours[tb].begin(), tours[tb].end());
    tours.erase(tours.begin() + tb);
  }

  // meet an exact vehicle-count constraint by forced merges or splits
  if (num_vehicles) {
    while (static_cast<int>(tours.size()) > *num_vehicles) {
      double bestd = kInf;
      int ba = -1, bb = -1;
      for (std::size_t a = 0; a < tours.size(); ++a)
        for (std::size_t b = 0; b < tours.size(); ++b) {
          if (a == b || static_cast<int>(tours[a].size() + tours[b].size()) > capacity) continue;
          const double d = C.at(tours[a].back(), tours[b].front()) - C.at(tours[a].back(), 1) -
                           C.at(1, tours[b].front());
          if (d < bestd) {
            bestd = d;
            ba = static_cast<int>(a);
            bb = static_cast<int>(b);
          }
        }
      if (ba < 0) throw infeasible_error("cvrp: cannot meet vehicle count under capacity");
      tours[static_cast<std::size_t>(ba)].insert(tours[static_cast<std::size_t>(ba)].end(),
                                                 tours[static_cast<std::size_t>(bb)].begin(),
                                                 tours[static_cast<std::size_t>(bb)].end());
      tours.erase(tours.begin() + bb);
    }
    while (static_cast<int>(tours.size()) < *num_vehicles) {
      double bestd = kInf;
      int bt = -1;
      std::size_t bpos = 0;
      for (std::size_t t = 0; t < tours.size(); ++t) {
        if (tours[t].size() < 2) continue;
        for (std::size_t p = 1; p < tours[t].size(); ++p) {
          const double d =
              C.at(tours[t][p - 1], 1) + C.at(1, tours[t][p]) - C.at(tours[t][p - 1], tours[t][p]);
          if (d < bestd) {
            bestd = d;
            bt = static_cast<int>(t);
            bpos = p;
          }
        }
      }
      if (bt < 0) throw infeasible_error("cvrp: cannot meet vehicle count (not enough customers)");
      std::vector<int> tail(tours[static_cast<std::size_t>(bt)].begin() + static_cast<std::ptrdiff_t>(bpos),
                            tours[static_cast<std::size_t>(bt)].end());
      tours[static_cast<std::size_t>(bt)].resize(bpos);
      tours.push_back(std::move(tail));
    }
  }

  auto full_seq = [](const std::vector<int>& interior) {
    std::vector<int> s{1};
    s.insert(s.end(), interior.begin(), interior.end());
    s.push_back(1);
    return s;
  };

  auto tcost = [&](const std::vector<int>& interior) {
    return interior.empty() ? 0.0 : tour_cost_of(C, full_seq(interior));
  };

  // local improvement: intra-tour 2-opt and inter-tour relocation; every
  // accepted move strictly decreases the plan cost, so this terminates
  bool improved = true;
  while (improved) {
    improved = false;
    for (auto& t : tours) {
      if (t.size() < 2) continue;
      auto seq = full_seq(t);
      double cur = tour_cost_of(C, seq);
      for (std::size_t i = 1; i + 1 < seq.size(); ++i)
        for (std::size_t j = i; j + 1 < seq.size(); ++j) {
          auto cand = seq;
          std::reverse(cand.begin() + static_cast<std::ptrdiff_t>(i),
                       cand.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          const double cc = tour_cost_of(C, cand);
          if (cc < cur - 1e-12) {
            seq = std::move(cand);
            cur = cc;
            improved = true;
          }
        }
      t.assign(seq.begin() + 1, seq.end() - 1);
    }
    if (!num_vehicles) {
      // relocation may empty a tour; only allowed when the count is free
      bool moved = true;
      while (moved) {
        moved = false;
        for (std::size_t a = 0; a < tours.size() && !moved; ++a) {
          for (std::size_t p = 0; p < tours[a].size() && !moved; ++p) {
            const int c = tours[a][p];
            auto ta = tours[a];
            ta.erase(ta.begin() + static_cast<std::ptrdiff_t>(p));
            for (std::size_t b = 0; b < tours.size() && !moved; ++b) {
              if (a == b || static_cast<int>(tours[b].size()) + 1 > capacity) continue;
              const double base = tcost(tours[a]) + tcost(tours[b]);
              for (std::size_t r = 0; r <= tours[b].size() && !moved; ++r) {
                auto tb = tours[b];
                tb.insert(tb.begin() + static_cast<std::ptrdiff_t>(r), c);
                if (tcost(ta) + tcost(tb) < base - 1e-12) {
                  tours[a] = ta;
                  tours[b] = tb;
                  moved = true;
                  improved = true;
                }
              }
            }
          }
        }
        tours.erase(std::remove_if(tours.begin(), tours.end(),
                                   [](const std::vector<int>& t) { return t.empty(); }),
                    tours.end());
      }
    }
  }

  TourPlan plan;
  plan.certified = false;
  for (auto& t : tours) plan.tours.push_back(Tour{full_seq(t)});
  canonicalize(plan);
  plan.total_cost = plan_cost(C, plan);
  return plan;
}

TourPlan heuristic_atsp(const CostMatrix& C) {
  const int n = static_cast<int>(C.n);
  std::vector<int> seq{1};
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  used[1] = true;
  int cur = 1;
  for (int step = 0; step < n - 1; ++step) {
    int best = -1;
    double bd = kInf;
    for (int c = 2; c <= n; ++c)
      if (!used[static_cast<std::size_t>(c)] && C.at(cur, c) < bd) {
        bd = C.at(cur, c);
        best = c;
      }
    seq.push_back(best);
    used[static_cast<std::size_t>(best)] = true;
    cur = best;
  }
  seq.push_back(1);
  double curc = tour_cost_of(C, seq);
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 1; i + 1 < seq.size(); ++i)
      for (std::size_t j = i; j + 1 < seq.size(); ++j) {
        auto cand = seq;
        std::reverse(cand.begin() + static_cast<std::ptrdiff_t>(i),
                     cand.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        const double cc = tour_cost_of(C, cand);
        if (cc < curc - 1e-15) {
          seq = std::move(cand);
          curc = cc;
          improved = true;
        }
      }
  }
  TourPlan plan;
  plan.certified = false;
  plan.tours.push_back(Tour{std::move(seq)});
  plan.total_cost = plan_cost(C, plan);
  return plan;
}

}  // namespace

TourPlan solve_cvrp(const CostMatrix& C, int capacity, std::optional<int> num_vehicles) {
  const int n = static_cast<int>(C.n);
  if (n < 2) throw validation_error("cvrp: need at least one customer");
  if (capacity < 1) throw validation_error("cvrp: capacity must be >= 1");
  const int k = n - 1;
  if (num_vehicles) {
    const int v = *num_vehicles;
    if (v < 1) throw validation_error("cvrp: num_vehicles must be >= 1");
    const long need = (k + static_cast<long>(capacity) - 1) / capacity;
    if (v > k || need > v)
      throw infeasible_error("cvrp: no feasible partition into " + std::to_string(v) +
                             " tours of capacity " + std::to_string(capacity));
  } else if (static_cast<long>(capacity) * k < k) {
    throw infeasible_error("cvrp: capacity infeasible");
  }

  const bool tsp_mode = num_vehicles && *num_vehicles == 1 && capacity >= k;
  if (tsp_mode) {
    if (n <= 16) return exact_cvrp(C, k, 1);  // Held-Karp partition with a single block
    return heuristic_atsp(C);
  }
  if (n <= 12) return exact_cvrp(C, std::min(capacity, k), num_vehicles);
  return heuristic_cvrp(C, capacity, num_vehicles);
}

TourPlan solve_atsp(const CostMatrix& C) {
  return solve_cvrp(C, kInfCapacity, 1);
}

}  // namespace soc
