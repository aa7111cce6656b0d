#include "rmpa/allocation.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rmpa {

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

uint64_t basis_key(const Gf2Subspace& s) {
    uint64_t key = 0;
    for (uint32_t b : s.basis) key = (key << 16) | b;
    return key;
}

}  // namespace

RedundancyMatrix build_redundancy_matrix(int m) {
    if (m < 4 || m > 8) throw std::domain_error("redundancy matrix needs 4 <= m <= 8");

    RedundancyMatrix dm;
    dm.m = m;
    dm.rows = (1 << (m - 1)) - 1;
    dm.cols = (1 << (m - 1)) - 1;
    dm.d_cols = (1 << (m - 2)) - 1;
    dm.r.assign(dm.rows, std::vector<uint32_t>(dm.cols, 0));

    std::map<uint64_t, uint32_t> label_of;
    uint32_t next_label = 1;
    for (int j = 1; j <= dm.rows; ++j) {
        for (int k = 1; k <= dm.cols; ++k) {
            Gf2Subspace s = compose_projection_chain(m, j, k);
            auto [it, inserted] = label_of.try_emplace(basis_key(s), next_label);
            if (inserted) ++next_label;
            dm.r[j - 1][k - 1] = it->second;
        }
    }
    dm.num_labels = next_label - 1;
    if (dm.num_labels != two_binomial(m, 2))
        throw std::logic_error("redundancy matrix label count mismatch");
    return dm;
}

IlpModel build_ilp(const RedundancyMatrix& dm, int G, int lambda) {
    if (!is_pow2(G) || !is_pow2(lambda)) throw std::domain_error("G and lambda must be powers of two");
    const int half = 1 << (dm.m - 1);
    if (G > half) throw std::domain_error("more groups than rows");
    if (lambda > half / 2) throw std::domain_error("lambda exceeds the dedicated column count");

    IlpModel model;
    model.m = dm.m;
    model.G = G;
    model.lambda = lambda;
    model.num_rows = dm.rows;
    model.num_cols = dm.d_cols;
    model.extra_pus_per_group = (half / 2) / lambda;

    // Group sizes: 2^{m-1}/G rows per group, except group 0 which is one row
    // short (the row counts then sum to 2^{m-1}-1 for every G).
    model.capacities.assign(G, half / G);
    model.capacities[0] -= 1;

    // Collect the label triples of D.
    std::map<uint32_t, std::vector<IlpModel::Cell>> cells_of;
    for (int j = 1; j <= dm.rows; ++j)
        for (int k = 1; k <= dm.d_cols; ++k) cells_of[dm.label(j, k)].push_back({j, k});
    for (auto& [label, cells] : cells_of) {
        if (cells.size() != 3)
            throw std::logic_error("duplicated label does not appear exactly three times");
        model.triples.push_back({cells[0], cells[1], cells[2]});
        model.triple_labels.push_back(label);
    }
    return model;
}

std::string verify_assignment(const IlpModel& model, const GroupAssignment& assign) {
    std::ostringstream err;
    if (assign.G != model.G || assign.lambda != model.lambda || assign.m != model.m)
        return "assignment parameters do not match the model";
    if (static_cast<int>(assign.groups.size()) != model.G) return "wrong number of groups";

    // Row partition and per-group counts.
    std::vector<int> group_of(model.num_rows + 1, -1);
    for (int g = 0; g < model.G; ++g) {
        const auto& grp = assign.groups[g];
        if (static_cast<int>(grp.rows.size()) != model.capacities[g]) {
            err << "group " << g << " has " << grp.rows.size() << " rows, expected "
                << model.capacities[g];
            return err.str();
        }
        for (int row : grp.rows) {
            if (row < 1 || row > model.num_rows) return "row index out of range";
            if (group_of[row] != -1) return "row assigned to two groups";
            group_of[row] = g;
        }
        for (int col : grp.cols)
            if (col < 1 || col > model.num_cols) return "column index out of range";
        int needed = (static_cast<int>(grp.cols.size()) + model.lambda - 1) / model.lambda;
        if (grp.p < needed) {
            err << "group " << g << " has p = " << grp.p << " < ceil(|cols|/lambda) = " << needed;
            return err.str();
        }
    }
    for (int row = 1; row <= model.num_rows; ++row)
        if (group_of[row] == -1) return "row not assigned to any group";

    // Coverage: every duplicated label must be processed by at least one
    // (group, row, column) after completion.
    std::vector<std::vector<uint8_t>> has_col(model.G, std::vector<uint8_t>(model.num_cols + 1, 0));
    for (int g = 0; g < model.G; ++g)
        for (int col : assign.groups[g].cols) has_col[g][col] = 1;
    for (size_t t = 0; t < model.triples.size(); ++t) {
        bool covered = false;
        for (const auto& cell : model.triples[t])
            if (has_col[group_of[cell.row]][cell.col]) covered = true;
        if (!covered) {
            err << "label " << model.triple_labels[t] << " is not covered";
            return err.str();
        }
    }

    int obj = 0;
    for (const auto& grp : assign.groups) obj += grp.p;
    if (obj != assign.objective) return "objective does not equal sum of p_i";
    if (assign.extra_pus_per_group != model.extra_pus_per_group)
        return "extra PU count does not match 2^{m-2}/lambda";
    return {};
}

void export_lp(const IlpModel& model, std::ostream& os) {
    os << "\\ Projection allocation, m=" << model.m << " G=" << model.G
       << " lambda=" << model.lambda << "\n";
    os << "Minimize\n obj:";
    for (int g = 0; g < model.G; ++g) os << (g ? " + " : " ") << "p_" << g + 1;
    os << "\nSubject To\n";

    // Eq. group-capacity: sum_k c_ik <= lambda * p_i.
    for (int g = 0; g < model.G; ++g) {
        os << " cap_" << g + 1 << ":";
        for (int k = 1; k <= model.num_cols; ++k) os << (k > 1 ? " + " : " ") << "c_" << g + 1 << "_" << k;
        os << " - " << model.lambda << " p_" << g + 1 << " <= 0\n";
    }
    // One copy of every duplicated label across all groups.
    for (size_t t = 0; t < model.triples.size(); ++t) {
        os << " cover_" << t + 1 << ":";
        bool first = true;
        for (int g = 0; g < model.G; ++g)
            for (const auto& cell : model.triples[t]) {
                os << (first ? " " : " + ") << "x_" << g + 1 << "_" << cell.row << "_" << cell.col;
                first = false;
            }
        os << " = 1\n";
    }
    // Linking: x <= c and x <= r.
    for (size_t t = 0; t < model.triples.size(); ++t)
        for (const auto& cell : model.triples[t])
            for (int g = 0; g < model.G; ++g) {
                os << " lc_" << g + 1 << "_" << cell.row << "_" << cell.col << ": x_" << g + 1 << "_"
                   << cell.row << "_" << cell.col << " - c_" << g + 1 << "_" << cell.col << " <= 0\n";
                os << " lr_" << g + 1 << "_" << cell.row << "_" << cell.col << ": x_" << g + 1 << "_"
                   << cell.row << "_" << cell.col << " - r_" << g + 1 << "_" << cell.row << " <= 0\n";
            }
    // Each row in exactly one group.
    for (int j = 1; j <= model.num_rows; ++j) {
        os << " row_" << j << ":";
        for (int g = 0; g < model.G; ++g) os << (g ? " + " : " ") << "r_" << g + 1 << "_" << j;
        os << " = 1\n";
    }
    // Fixed group sizes.
    for (int g = 0; g < model.G; ++g) {
        os << " count_" << g + 1 << ":";
        for (int j = 1; j <= model.num_rows; ++j) os << (j > 1 ? " + " : " ") << "r_" << g + 1 << "_" << j;
        os << " = " << model.capacities[g] << "\n";
    }

    os << "Bounds\n";
    int pmax = (model.num_cols + model.lambda - 1) / model.lambda;
    for (int g = 0; g < model.G; ++g) os << " 0 <= p_" << g + 1 << " <= " << pmax << "\n";

    os << "Binaries\n";
    for (size_t t = 0; t < model.triples.size(); ++t)
        for (const auto& cell : model.triples[t])
            for (int g = 0; g < model.G; ++g) os << " x_" << g + 1 << "_" << cell.row << "_" << cell.col;
    os << "\n";
    for (int g = 0; g < model.G; ++g)
        for (int k = 1; k <= model.num_cols; ++k) os << " c_" << g + 1 << "_" << k;
    os << "\n";
    for (int g = 0; g < model.G; ++g)
        for (int j = 1; j <= model.num_rows; ++j) os << " r_" << g + 1 << "_" << j;
    os << "\nGenerals\n";
    for (int g = 0; g < model.G; ++g) os << " p_" << g + 1;
    os << "\nEnd\n";
}

void export_lp_file(const IlpModel& model, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    export_lp(model, f);
    if (!f.good()) throw std::runtime_error("write failure on " + path);
}

uint64_t IupaSchedule::fod_per_iteration() const {
    uint64_t total = 0;
    for (const auto& rp : rows) total += rp.cols.size();
    return total;
}

IupaSchedule derive_schedule(const GroupAssignment& assign, const RedundancyMatrix& dm) {
    if (assign.m != dm.m) throw std::invalid_argument("assignment/matrix mismatch");
    const int half_cols = 1 << (dm.m - 2);

    IupaSchedule sched;
    sched.m = assign.m;
    sched.G = assign.G;
    sched.lambda = assign.lambda;
    sched.ideal = false;
    sched.duplicate_count = assign.duplicate_count;

    for (int g = 0; g < assign.G; ++g) {
        const auto& grp = assign.groups[g];
        // Full column set: selected ILP columns plus the dedicated right
        // half 2^{m-2} .. 2^{m-1}-1.
        std::vector<int> cols = grp.cols;
        for (int k = half_cols; k <= dm.cols; ++k) cols.push_back(k);
        std::sort(cols.begin(), cols.end());
        for (int row : grp.rows) {
            IupaSchedule::RowPlan rp;
            rp.row = row;
            rp.group = g;
            rp.cols = cols;
            sched.rows.push_back(std::move(rp));
        }
    }
    std::sort(sched.rows.begin(), sched.rows.end(),
              [](const auto& a, const auto& b) { return a.row < b.row; });

    // Safety: completion must cover every label at least once.
    std::vector<uint8_t> seen(dm.num_labels + 1, 0);
    for (const auto& rp : sched.rows)
        for (int col : rp.cols) seen[dm.label(rp.row, col)] = 1;
    for (uint32_t l = 1; l <= dm.num_labels; ++l)
        if (!seen[l]) throw std::logic_error("schedule loses coverage of a label");
    return sched;
}

IupaSchedule ideal_schedule(int m) {
    if (m < 4 || m > kMaxDimension) throw std::domain_error("ideal schedule needs m >= 4");
    IupaSchedule sched;
    sched.m = m;
    sched.G = 1;
    sched.lambda = 0;
    sched.ideal = true;
    sched.duplicate_count = 0;
    const int rows = (1 << (m - 1)) - 1;
    for (int b = 1; b <= rows; ++b) {
        IupaSchedule::RowPlan rp;
        rp.row = b;
        rp.group = 0;
        int first = 1;
        while (2 * first <= b) first *= 2;  // 2^floor(log2 b)
        for (int k = first; k <= rows; ++k) rp.cols.push_back(k);
        sched.rows.push_back(std::move(rp));
    }
    return sched;
}

std::string assignment_to_json(const GroupAssignment& assign) {
    nlohmann::json j;
    j["m"] = assign.m;
    j["G"] = assign.G;
    j["lambda"] = assign.lambda;
    j["groups"] = nlohmann::json::array();
    for (const auto& grp : assign.groups)
        j["groups"].push_back({{"rows", grp.rows}, {"cols", grp.cols}, {"p", grp.p}});
    j["duplicates"] = assign.duplicate_count;
    j["objective"] = assign.objective;
    j["proven_optimal"] = assign.proven_optimal;
    return j.dump(2) + "\n";
}

GroupAssignment assignment_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    GroupAssignment a;
    a.m = j.at("m").get<int>();
    a.G = j.at("G").get<int>();
    a.lambda = j.at("lambda").get<int>();
    if (a.m < 4 || a.m > 8 || a.lambda < 1 || (a.lambda & (a.lambda - 1)) != 0 ||
        a.lambda > (1 << (a.m - 2)))
        throw std::invalid_argument("schedule has invalid m/lambda");
    for (const auto& grp : j.at("groups")) {
        GroupAssignment::Group g;
        g.rows = grp.at("rows").get<std::vector<int>>();
        g.cols = grp.at("cols").get<std::vector<int>>();
        g.p = grp.at("p").get<int>();
        a.groups.push_back(std::move(g));
    }
    a.duplicate_count = j.at("duplicates").get<int>();
    a.proven_optimal = j.value("proven_optimal", false);
    a.extra_pus_per_group = (1 << (a.m - 2)) / a.lambda;
    a.objective = 0;
    for (const auto& g : a.groups) a.objective += g.p;
    return a;
}

GroupAssignment load_assignment(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open schedule file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    try {
        return assignment_from_json(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed schedule file " + path + ": " + e.what());
    }
}

void save_assignment(const GroupAssignment& assign, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << assignment_to_json(assign);
    if (!f.good()) throw std::runtime_error("write failure on " + path);
}

}  // namespace rmpa
