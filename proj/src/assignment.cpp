#include "uavplan/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace uavplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Square working copy: real entries kept, forbidden pairs raised to a
// sentinel larger than any feasible total, dummy rows/cols filled with 0.
struct Padded {
  int n = 0;
  int rows = 0;
  int cols = 0;
  double big = 0.0;
  CostRows a;
};

Padded pad_matrix(const CostRows& cost) {
  Padded p;
  p.rows = static_cast<int>(cost.size());
  p.cols = p.rows == 0 ? 0 : static_cast<int>(cost[0].size());
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != p.cols)
      throw std::invalid_argument("assignment: ragged cost matrix");
  p.n = std::max(p.rows, p.cols);
  double finite_sum = 0.0;
  for (const auto& row : cost)
    for (double v : row) {
      if (std::isnan(v) || v < 0.0)
        throw std::invalid_argument("assignment: costs must be non-negative");
      if (std::isfinite(v)) finite_sum += v;
    }
  p.big = finite_sum + 1.0;
  p.a.assign(p.n, std::vector<double>(p.n, 0.0));
  for (int i = 0; i < p.rows; ++i)
    for (int j = 0; j < p.cols; ++j) p.a[i][j] = std::isfinite(cost[i][j]) ? cost[i][j] : p.big;
  // Dummy rows stay all-zero; dummy columns cost big for real rows so real
  // tasks are preferred whenever feasible.
  for (int i = 0; i < p.rows; ++i)
    for (int j = p.cols; j < p.n; ++j) p.a[i][j] = p.big;
  return p;
}

MatrixAssignment finalize(const Padded& p, const std::vector<int>& row_to_col,
                          const CostRows& cost) {
  MatrixAssignment out;
  out.row_to_col.assign(p.rows, -1);
  for (int i = 0; i < p.rows; ++i) {
    const int j = row_to_col[i];
    if (j >= 0 && j < p.cols && std::isfinite(cost[i][j])) {
      out.row_to_col[i] = j;
      out.total += cost[i][j];
    }
  }
  return out;
}

}  // namespace

std::optional<int> greedy_select(const std::vector<double>& row) {
  if (row.empty()) throw std::invalid_argument("greedy_select: empty row");
  int best = -1;
  for (int j = 0; j < static_cast<int>(row.size()); ++j) {
    if (!std::isfinite(row[j])) continue;
    if (best < 0 || row[j] < row[best]) best = j;
  }
  if (best < 0) return std::nullopt;
  return best;
}

MatrixAssignment hungarian_solve_matrix(const CostRows& cost) {
  if (cost.empty() || cost[0].empty()) return {};
  const Padded p = pad_matrix(cost);
  const int n = p.n;

  // Potentials form of the Kuhn-Munkres algorithm, 1-indexed internally.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = p.a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (match[j] >= 1) row_to_col[match[j] - 1] = j - 1;
  return finalize(p, row_to_col, cost);
}

MatrixAssignment auction_solve_matrix(const CostRows& cost, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("auction: epsilon must be > 0");
  if (cost.empty() || cost[0].empty()) return {};
  const Padded p = pad_matrix(cost);
  const int n = p.n;

  // Forward auction on values big - cost (maximization form).
  std::vector<double> price(n, 0.0);
  std::vector<int> owner(n, -1);
  std::vector<int> row_to_col(n, -1);
  std::deque<int> pending;
  for (int i = 0; i < n; ++i) pending.push_back(i);

  while (!pending.empty()) {
    const int bidder = pending.front();
    pending.pop_front();
    int best_j = -1;
    double best_net = -kInf;
    double second_net = -kInf;
    for (int j = 0; j < n; ++j) {
      const double net = (p.big - p.a[bidder][j]) - price[j];
      if (net > best_net) {
        second_net = best_net;
        best_net = net;
        best_j = j;
      } else if (net > second_net) {
        second_net = net;
      }
    }
    const double raise = (second_net == -kInf ? 0.0 : best_net - second_net) + epsilon;
    price[best_j] += raise;
    if (owner[best_j] >= 0) {
      row_to_col[owner[best_j]] = -1;
      pending.push_back(owner[best_j]);
    }
    owner[best_j] = bidder;
    row_to_col[bidder] = best_j;
  }
  return finalize(p, row_to_col, cost);
}

}  // namespace uavplan
