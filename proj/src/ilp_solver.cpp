#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "rmpa/allocation.hpp"

namespace rmpa {

namespace {

// Deterministic search randomness (splitmix64); the solver never consults
// the wall clock, so identical options give identical results.
struct SearchRng {
    uint64_t s;
    explicit SearchRng(uint64_t seed) : s(seed ^ 0x5bf03635963fd3dcull) {}
    uint64_t next() {
        s += 0x9E3779B97F4A7C15ull;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    uint32_t below(uint32_t n) { return static_cast<uint32_t>(next() % n); }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

using Mask = uint64_t;

struct Cell0 {
    uint8_t row;
    uint8_t col;
};

struct Instance {
    int R = 0, C = 0, G = 0, lambda = 0;
    std::vector<int> caps;
    std::vector<std::array<Cell0, 3>> tri;

    int pus(Mask mask) const {
        int pop = __builtin_popcountll(mask);
        return (pop + lambda - 1) / lambda;
    }
};

Instance make_instance(const IlpModel& model) {
    Instance ins;
    ins.R = model.num_rows;
    ins.C = model.num_cols;
    ins.G = model.G;
    ins.lambda = model.lambda;
    ins.caps = model.capacities;
    ins.tri.reserve(model.triples.size());
    for (const auto& t : model.triples) {
        std::array<Cell0, 3> a;
        for (int i = 0; i < 3; ++i)
            a[i] = {static_cast<uint8_t>(t[i].row - 1), static_cast<uint8_t>(t[i].col - 1)};
        ins.tri.push_back(a);
    }
    return ins;
}

struct Solution {
    std::vector<int8_t> grp_of;  // per row
    std::vector<Mask> masks;     // per group
    int obj = 0;
    int dup = 0;

    long energy() const { return 10000L * obj + dup; }
};

// Labels covered twice or more once every group processes all of its
// selected columns for all of its rows.
int exact_duplicates(const Instance& ins, const std::vector<int8_t>& grp_of,
                     const std::vector<Mask>& masks) {
    int dup = 0;
    for (const auto& t : ins.tri) {
        int cover = 0;
        for (const auto& c : t)
            if (masks[grp_of[c.row]] >> c.col & 1) ++cover;
        if (cover >= 2) ++dup;
    }
    return dup;
}

// Greedy set cover over (group, column) picks followed by redundancy
// removal; the columns a group selects apply to all of its rows.
struct GreedyWorkspace {
    std::vector<int> cnt;                 // per (g,c) key
    std::vector<uint8_t> covered;         // per triple
    std::vector<int> cover_cnt;           // per triple, by selected keys
    std::vector<std::array<int, 3>> opts; // deduped option keys per triple (-1 pad)
    std::vector<int> key_start;           // counting-sort index: key -> range into key_tris
    std::vector<uint32_t> key_tris;
    std::vector<int> selected;
};

void greedy_columns(const Instance& ins, const std::vector<int8_t>& grp_of, GreedyWorkspace& ws,
                    std::vector<Mask>& masks, int& obj) {
    const int keys = ins.G * ins.C;
    const size_t T = ins.tri.size();
    ws.cnt.assign(keys, 0);
    ws.covered.assign(T, 0);
    ws.cover_cnt.assign(T, 0);
    ws.opts.resize(T);
    ws.selected.clear();

    for (size_t t = 0; t < T; ++t) {
        auto& o = ws.opts[t];
        o = {-1, -1, -1};
        int n = 0;
        for (const auto& c : ins.tri[t]) {
            int key = grp_of[c.row] * ins.C + c.col;
            bool seen = false;
            for (int i = 0; i < n; ++i) seen |= (o[i] == key);
            if (!seen) o[n++] = key;
        }
        for (int i = 0; i < n; ++i) ++ws.cnt[o[i]];
    }

    // key -> triples having that option (counting sort).
    ws.key_start.assign(keys + 1, 0);
    for (size_t t = 0; t < T; ++t)
        for (int key : ws.opts[t])
            if (key >= 0) ++ws.key_start[key + 1];
    for (int k = 0; k < keys; ++k) ws.key_start[k + 1] += ws.key_start[k];
    ws.key_tris.resize(ws.key_start[keys]);
    {
        std::vector<int> fill(ws.key_start.begin(), ws.key_start.end() - 1);
        for (size_t t = 0; t < T; ++t)
            for (int key : ws.opts[t])
                if (key >= 0) ws.key_tris[fill[key]++] = static_cast<uint32_t>(t);
    }

    size_t remaining = T;
    while (remaining > 0) {
        int best_key = -1, best_cnt = -1;
        for (int k = 0; k < keys; ++k) {
            if (ws.cnt[k] > best_cnt ||
                (ws.cnt[k] == best_cnt && best_key >= 0 &&
                 ins.caps[k / ins.C] < ins.caps[best_key / ins.C])) {
                best_cnt = ws.cnt[k];
                best_key = k;
            }
        }
        ws.selected.push_back(best_key);
        for (int idx = ws.key_start[best_key]; idx < ws.key_start[best_key + 1]; ++idx) {
            uint32_t t = ws.key_tris[idx];
            ++ws.cover_cnt[t];
            if (ws.covered[t]) continue;
            ws.covered[t] = 1;
            --remaining;
            for (int key : ws.opts[t])
                if (key >= 0) --ws.cnt[key];
        }
        ws.cnt[best_key] = -1;  // do not pick twice
    }

    // Drop selections every triple can do without.
    for (auto it = ws.selected.rbegin(); it != ws.selected.rend(); ++it) {
        int key = *it;
        bool removable = true;
        for (int idx = ws.key_start[key]; idx < ws.key_start[key + 1] && removable; ++idx)
            removable = ws.cover_cnt[ws.key_tris[idx]] >= 2;
        if (removable) {
            for (int idx = ws.key_start[key]; idx < ws.key_start[key + 1]; ++idx)
                --ws.cover_cnt[ws.key_tris[idx]];
            *it = -1;
        }
    }

    masks.assign(ins.G, 0);
    for (int key : ws.selected)
        if (key >= 0) masks[key / ins.C] |= Mask{1} << (key % ins.C);
    obj = 0;
    for (int g = 0; g < ins.G; ++g) obj += ins.pus(masks[g]);
}

std::vector<int8_t> random_partition(const Instance& ins, SearchRng& rng) {
    std::vector<int> rows(ins.R);
    std::iota(rows.begin(), rows.end(), 0);
    for (int i = ins.R - 1; i > 0; --i) std::swap(rows[i], rows[rng.below(i + 1)]);
    std::vector<int8_t> grp_of(ins.R, 0);
    int at = 0;
    for (int g = 0; g < ins.G; ++g)
        for (int c = 0; c < ins.caps[g]; ++c) grp_of[rows[at++]] = static_cast<int8_t>(g);
    return grp_of;
}

// Simulated annealing over row partitions; the column sets come from the
// greedy subproblem.  `obj_cap` switches to pure duplicate minimization at a
// fixed objective.
void anneal(const Instance& ins, SearchRng& rng, uint64_t steps, int obj_cap, Solution& best,
            int stop_objective) {
    GreedyWorkspace ws;
    std::vector<Mask> masks;
    int obj = 0;

    std::vector<int8_t> cur = best.grp_of.empty() ? random_partition(ins, rng) : best.grp_of;
    greedy_columns(ins, cur, ws, masks, obj);
    long cur_e = 10000L * obj + exact_duplicates(ins, cur, masks);
    if (best.grp_of.empty() || cur_e < best.energy()) {
        best.grp_of = cur;
        best.masks = masks;
        best.obj = obj;
        best.dup = exact_duplicates(ins, cur, masks);
    }

    const uint64_t restart_every = std::max<uint64_t>(steps / 8, 20000);
    uint64_t since_improvement = 0;
    double t0 = 4000.0, t1 = 1.0;

    for (uint64_t s = 0; s < steps; ++s) {
        if (stop_objective >= 0 && best.obj <= stop_objective) return;
        if (since_improvement > restart_every) {
            cur = random_partition(ins, rng);
            greedy_columns(ins, cur, ws, masks, obj);
            int dup0 = exact_duplicates(ins, cur, masks);
            cur_e = 10000L * obj + dup0;
            if ((obj_cap < 0 || obj <= obj_cap) && cur_e < best.energy()) {
                best.grp_of = cur;
                best.masks = masks;
                best.obj = obj;
                best.dup = dup0;
            }
            since_improvement = 0;
        }

        int a = static_cast<int>(rng.below(ins.R));
        int b = static_cast<int>(rng.below(ins.R));
        if (cur[a] == cur[b]) {
            ++since_improvement;
            continue;
        }
        std::swap(cur[a], cur[b]);
        greedy_columns(ins, cur, ws, masks, obj);
        int dup = exact_duplicates(ins, cur, masks);
        long e = (obj_cap >= 0 && obj > obj_cap) ? 1000000L + 10000L * obj : 10000L * obj + dup;
        if ((obj_cap < 0 || obj <= obj_cap) && 10000L * obj + dup < best.energy()) {
            best.grp_of = cur;
            best.masks = masks;
            best.obj = obj;
            best.dup = dup;
            since_improvement = 0;
        }
        double temp = t0 * std::pow(t1 / t0, static_cast<double>(s) / steps);
        if (e <= cur_e || rng.unit() < std::exp((cur_e - e) / temp)) {
            cur_e = e;
        } else {
            std::swap(cur[a], cur[b]);  // reject
        }
        ++since_improvement;
    }
}

// Depth-first branch and bound over the label-copy choices.  Assigning a
// copy pins its row to a group and forces that group's column; the bound is
// the PU count implied by the forced columns.
struct Bnb {
    const Instance& ins;
    uint64_t node_budget;
    uint64_t nodes = 0;
    bool aborted = false;

    std::vector<int8_t> grp_of;
    std::vector<int> rem_cap;
    std::vector<int> rows_in;  // rows assigned per group
    std::vector<Mask> masks;
    Solution best;  // incumbent (in/out)

    explicit Bnb(const Instance& i, uint64_t budget) : ins(i), node_budget(budget) {
        grp_of.assign(ins.R, -1);
        rem_cap = ins.caps;
        rows_in.assign(ins.G, 0);
        masks.assign(ins.G, 0);
    }

    int bound() const {
        int b = 0;
        for (int g = 0; g < ins.G; ++g) b += ins.pus(masks[g]);
        return b;
    }

    bool covered(size_t t) const {
        for (const auto& c : ins.tri[t]) {
            int g = grp_of[c.row];
            if (g >= 0 && (masks[g] >> c.col & 1)) return true;
        }
        return false;
    }

    struct Option {
        int g;
        uint8_t row, col;
        bool assigns_row;
        int delta;
    };

    void options_for(size_t t, std::vector<Option>& out) const {
        out.clear();
        auto push = [&](int g, const Cell0& c, bool assigns) {
            for (const auto& o : out)
                if (o.g == g && o.col == c.col && o.row == c.row) return;
            int delta = 0;
            if (!(masks[g] >> c.col & 1)) {
                int pop = __builtin_popcountll(masks[g]);
                delta = (pop % ins.lambda == 0) ? 1 : 0;
            }
            out.push_back({g, c.row, c.col, assigns, delta});
        };
        for (const auto& c : ins.tri[t]) {
            int g = grp_of[c.row];
            if (g >= 0) {
                push(g, c, false);
            } else {
                bool empty_seen = false;
                for (int cand = 0; cand < ins.G; ++cand) {
                    if (rem_cap[cand] == 0) continue;
                    if (cand >= 1 && rows_in[cand] == 0) {
                        if (empty_seen) continue;  // symmetric to the previous empty group
                        empty_seen = true;
                    }
                    push(cand, c, true);
                }
            }
        }
        std::sort(out.begin(), out.end(), [](const Option& a, const Option& b) {
            if (a.delta != b.delta) return a.delta < b.delta;
            if (a.assigns_row != b.assigns_row) return !a.assigns_row;
            if (a.g != b.g) return a.g < b.g;
            if (a.col != b.col) return a.col < b.col;
            return a.row < b.row;
        });
    }

    void complete_and_record() {
        Solution sol;
        sol.grp_of = grp_of;
        std::vector<int> cap = rem_cap;
        int g = 0;
        for (int r = 0; r < ins.R; ++r) {
            if (sol.grp_of[r] >= 0) continue;
            while (cap[g] == 0) ++g;
            sol.grp_of[r] = static_cast<int8_t>(g);
            --cap[g];
        }
        sol.masks = masks;
        sol.obj = bound();
        sol.dup = exact_duplicates(ins, sol.grp_of, sol.masks);
        if (sol.obj < best.obj || best.grp_of.empty()) best = sol;
    }

    void dfs() {
        if (aborted) return;
        if (++nodes > node_budget) {
            aborted = true;
            return;
        }
        int b = bound();
        if (!best.grp_of.empty() && b >= best.obj) return;

        // Most-constrained uncovered triple.
        static thread_local std::vector<Option> opts, pick;
        int best_t = -1;
        size_t fewest = SIZE_MAX;
        for (size_t t = 0; t < ins.tri.size(); ++t) {
            if (covered(t)) continue;
            options_for(t, opts);
            if (opts.size() < fewest) {
                fewest = opts.size();
                best_t = static_cast<int>(t);
                pick = opts;
                if (fewest <= 1) break;
            }
        }
        if (best_t < 0) {
            complete_and_record();
            return;
        }
        if (fewest == 0) return;  // dead end

        for (const auto& o : pick) {
            Mask saved = masks[o.g];
            masks[o.g] |= Mask{1} << o.col;
            if (o.assigns_row) {
                grp_of[o.row] = static_cast<int8_t>(o.g);
                --rem_cap[o.g];
                ++rows_in[o.g];
            }
            dfs();
            if (o.assigns_row) {
                grp_of[o.row] = -1;
                ++rem_cap[o.g];
                --rows_in[o.g];
            }
            masks[o.g] = saved;
            if (aborted) return;
        }
    }
};

}  // namespace

GroupAssignment solve_ilp(const IlpModel& model, const SolveOptions& options) {
    Instance ins = make_instance(model);

    GroupAssignment out;
    out.m = model.m;
    out.G = model.G;
    out.lambda = model.lambda;
    out.extra_pus_per_group = model.extra_pus_per_group;

    Solution best;
    bool proven = false;

    if (ins.tri.empty()) {
        best.grp_of.assign(ins.R, 0);
        int at = 0;
        for (int g = 0; g < ins.G; ++g)
            for (int c = 0; c < ins.caps[g]; ++c) best.grp_of[at++] = static_cast<int8_t>(g);
        best.masks.assign(ins.G, 0);
        proven = true;
    } else {
        SearchRng rng(options.seed);

        const double budget = std::max(options.time_limit_s, 1.0);
        const uint64_t anneal_steps =
            std::clamp<uint64_t>(static_cast<uint64_t>(budget * 120000.0), 100000, 30000000);
        const uint64_t bnb_nodes =
            std::clamp<uint64_t>(static_cast<uint64_t>(budget * 250000.0), 200000, 200000000);
        const uint64_t dup_steps = anneal_steps / 2;

        anneal(ins, rng, anneal_steps, -1, best, options.stop_objective);

        bool stopped = options.stop_objective >= 0 && best.obj <= options.stop_objective;
        if (!stopped) {
            Bnb bnb(ins, bnb_nodes);
            bnb.best = best;
            bnb.dfs();
            best = bnb.best;
            proven = !bnb.aborted;
        }

        // Duplicate clean-up at the achieved objective.
        Solution polished = best;
        anneal(ins, rng, dup_steps, best.obj, polished, -1);
        if (polished.obj == best.obj && polished.dup < best.dup) best = polished;
    }

    // Assemble groups: rows ascending, ILP columns ascending, the short
    // group stays index 0 and the rest are ordered by smallest row.
    out.groups.assign(model.G, {});
    for (int r = 0; r < ins.R; ++r) out.groups[best.grp_of[r]].rows.push_back(r + 1);
    for (int g = 0; g < model.G; ++g) {
        for (int c = 0; c < ins.C; ++c)
            if (best.masks[g] >> c & 1) out.groups[g].cols.push_back(c + 1);
        out.groups[g].p =
            (static_cast<int>(out.groups[g].cols.size()) + model.lambda - 1) / model.lambda;
    }
    if (model.G > 2)
        std::sort(out.groups.begin() + 1, out.groups.end(), [](const auto& a, const auto& b) {
            return a.rows.front() < b.rows.front();
        });

    out.objective = 0;
    for (const auto& g : out.groups) out.objective += g.p;
    out.duplicate_count = ins.tri.empty() ? 0 : exact_duplicates(ins, best.grp_of, best.masks);
    out.proven_optimal = proven;
    return out;
}

}  // namespace rmpa
