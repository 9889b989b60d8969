#pragma once

#include <optional>
#include <vector>

namespace uavplan {

using CostRows = std::vector<std::vector<double>>;

// Index of the smallest finite entry; ties resolve to the lowest index.
// Returns nullopt when every entry is infinite (no feasible task).
std::optional<int> greedy_select(const std::vector<double>& row);

struct MatrixAssignment {
  // row_to_col[i] = matched column of row i, or -1 when the row stays
  // unmatched (dummy or infeasible match).
  std::vector<int> row_to_col;
  double total = 0.0;  // sum over real matches
};

// Minimum-cost one-to-one assignment. Rectangular inputs are padded
// internally; +infinity marks forbidden pairs. When no feasible perfect
// matching exists on the real entries the result is the cheapest partial
// assignment, with the remaining rows unmatched.
MatrixAssignment hungarian_solve_matrix(const CostRows& cost);

// Epsilon-scaling auction on the same conventions; total cost is within
// (matched pairs) * epsilon of the optimum. Deterministic: bidders are
// processed in ascending row order.
MatrixAssignment auction_solve_matrix(const CostRows& cost, double epsilon);

}  // namespace uavplan
