#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmpa/gf2.hpp"

namespace rmpa {

// Redundancy structure of third-order decoding.  R[j][k] (1-based) is the
// label of the 2-D subspace realized by the top-level projection onto {0, j}
// followed by the second-level projection onto quotient coordinate k.
// Labels are assigned by first appearance in row-major order.  The left
// block D (columns 1 .. 2^{m-2}-1) carries every duplicated label exactly
// three times; the right block is duplicate-free.
struct RedundancyMatrix {
    int m = 0;
    int rows = 0;    // 2^{m-1}-1
    int cols = 0;    // 2^{m-1}-1
    int d_cols = 0;  // 2^{m-2}-1
    uint32_t num_labels = 0;
    std::vector<std::vector<uint32_t>> r;

    uint32_t label(int row, int col) const { return r[row - 1][col - 1]; }
};

RedundancyMatrix build_redundancy_matrix(int m);

// Projection-allocation ILP: minimize the total number of PUs,
// sum_i ceil(|cols_i| / lambda), such that every duplicated label is
// processed by some group, each row belongs to exactly one group, and group
// sizes are fixed (group 0 one row short).
struct IlpModel {
    int m = 0, G = 0, lambda = 0;
    int num_rows = 0;  // rows of D
    int num_cols = 0;  // columns of D
    std::vector<int> capacities;
    struct Cell {
        int row = 0, col = 0;  // 1-based
    };
    std::vector<std::array<Cell, 3>> triples;
    std::vector<uint32_t> triple_labels;
    int extra_pus_per_group = 0;  // 2^{m-2}/lambda dedicated right-half PUs
};

IlpModel build_ilp(const RedundancyMatrix& dm, int G, int lambda);

struct GroupAssignment {
    int m = 0, G = 0, lambda = 0;
    struct Group {
        std::vector<int> rows;
        std::vector<int> cols;  // ILP columns only (left block)
        int p = 0;
    };
    std::vector<Group> groups;
    int extra_pus_per_group = 0;
    int objective = 0;       // sum of p_i
    int duplicate_count = 0; // labels covered more than once after completion
    bool proven_optimal = false;

    int total_pus() const { return objective + G * extra_pus_per_group; }
};

struct SolveOptions {
    // Converted into deterministic search budgets, so identical options give
    // identical results; wall time tracks the limit approximately.
    double time_limit_s = 120.0;
    uint64_t seed = 1;
    // Stop as soon as an incumbent with objective <= stop_objective is
    // known (equivalent of a best-objective stop).  Negative = disabled.
    int stop_objective = -1;
};

// Built-in exact branch-and-bound with an annealing front end; returns the
// best incumbent when the node budget runs out before the proof completes.
GroupAssignment solve_ilp(const IlpModel& model, const SolveOptions& options = {});

// Independent constraint verifier (no solver trust): empty string when every
// constraint holds, else a diagnostic.
std::string verify_assignment(const IlpModel& model, const GroupAssignment& assign);

// LP-format export of the exact model, suitable for external solvers.
void export_lp(const IlpModel& model, std::ostream& os);
void export_lp_file(const IlpModel& model, const std::string& path);

// Execution plan for the IUPA decoder: per row, the full column set its
// group processes (selected ILP columns plus the dedicated right half).
struct IupaSchedule {
    int m = 0, G = 1, lambda = 0;
    bool ideal = false;
    struct RowPlan {
        int row = 0;
        int group = 0;
        std::vector<int> cols;
    };
    std::vector<RowPlan> rows;
    int duplicate_count = 0;

    uint64_t fod_per_iteration() const;
};

IupaSchedule derive_schedule(const GroupAssignment& assign, const RedundancyMatrix& dm);

// Duplicate-free reference schedule: row b processes second-level columns
// 2^floor(log2 b) .. 2^{m-1}-1, which touches every label exactly once.
IupaSchedule ideal_schedule(int m);

// Assignment (de)serialization; the schedule JSON object is
// {m, G, lambda, groups:[{rows, cols, p}], duplicates, objective,
//  proven_optimal}.
std::string assignment_to_json(const GroupAssignment& assign);
GroupAssignment assignment_from_json(const std::string& text);
GroupAssignment load_assignment(const std::string& path);
void save_assignment(const GroupAssignment& assign, const std::string& path);

}  // namespace rmpa
