#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "presentation.hpp"
#include "subgroup_graph.hpp"
#include "word.hpp"

namespace orbfold {

struct NormalFormReport {
    bool generates = false;
    std::vector<Word> canonical_tuple;
    std::vector<std::int64_t> nu;   // one entry per torsion factor, basis order
    int trivial_count = 0;
    bool irreducible = false;
    // for non-generating input: Kurosh data of the folded subgroup graph
    int subgroup_rank = 0;
    std::int64_t subgroup_index = 0; // 0 = infinite
};

// Grushko fold of the wedge of loops with tuple bookkeeping, then read the
// standard form off the leaf tuples. nu is canonicalized by nu -> min(nu, m-nu).
inline NormalFormReport nielsen_normal_form(const std::vector<Word>& tuple, const FreeProductBasis& basis) {
    StarGraph g(basis, true);
    for (const auto& w : tuple) g.add_loop(w);
    g.fold();
    g.core_based();

    NormalFormReport rep;
    if (!g.is_whole_group()) {
        rep.generates = false;
        rep.subgroup_rank = g.kurosh_rank();
        rep.subgroup_index = g.index();
        return rep;
    }
    rep.generates = true;
    int trivials = 0;
    for (const auto& n : g.nodes)
        if (n.alive && n.is_center) trivials += n.trivial_count;

    std::vector<std::int64_t> nu_all(basis.size(), 1);
    for (const auto& n : g.nodes) {
        if (!n.alive || n.is_center) continue;
        std::int64_t m = basis.order_of(n.factor);
        std::vector<std::int64_t> entries;
        for (auto e : n.tuple) {
            std::int64_t v = Word::norm_exp(e, m);
            if (v == 0) ++trivials;
            else entries.push_back(v);
        }
        if (entries.empty()) throw std::logic_error("full leaf with empty tuple");
        if (entries.size() >= 2) {
            // Euclid plus a spare slot pumps the factor down to exponent 1
            nu_all[n.factor] = 1;
            trivials += (int)entries.size() - 1;
        } else {
            std::int64_t e = entries[0];
            if (m == 0) nu_all[n.factor] = 1; // e = +-1 in Z
            else nu_all[n.factor] = std::min(e, m - e);
        }
    }
    // a spare trivial slot pumps every nu down to 1
    if (trivials > 0) std::fill(nu_all.begin(), nu_all.end(), 1);

    rep.trivial_count = trivials;
    rep.irreducible = trivials == 0;
    for (int f = 0; f < basis.size(); ++f)
        rep.canonical_tuple.push_back(Word::letter(f, basis.is_torsion(f) ? nu_all[f] : 1, basis));
    for (int i = 0; i < trivials; ++i) rep.canonical_tuple.push_back(Word());
    for (int f = 0; f < basis.size(); ++f)
        if (basis.is_torsion(f)) rep.nu.push_back(nu_all[f]);
    return rep;
}

// Rigid iff irreducible with every torsion exponent nu_i >= 2; reducible
// tuples count as non-rigid.
inline bool is_rigid(const std::vector<Word>& tuple, const FreeProductBasis& basis) {
    NormalFormReport rep = nielsen_normal_form(tuple, basis);
    if (!rep.generates) throw std::domain_error("rigidity is only defined for generating tuples");
    if (!rep.irreducible) return false;
    for (auto v : rep.nu)
        if (v < 2) return false;
    return true;
}

// --- bounded Nielsen search ---

// Canonical representative modulo entry permutations and inversions.
inline std::vector<Word> canonical_tuple_form(std::vector<Word> t, const FreeProductBasis& basis) {
    for (auto& w : t) {
        Word inv = w.inverse(basis);
        if (inv < w) w = inv;
    }
    std::sort(t.begin(), t.end());
    return t;
}

inline std::string tuple_key(const std::vector<Word>& t) {
    std::ostringstream os;
    for (const auto& w : t) {
        for (const auto& s : w.syls) os << s.factor << ":" << s.exp << ",";
        os << ";";
    }
    return os.str();
}

enum class OracleVerdict { Equivalent, InequivalentUpToBounds, BudgetExceeded };

struct OracleResult {
    OracleVerdict verdict = OracleVerdict::InequivalentUpToBounds;
    int depth_used = 0;
};

// All canonical forms one multiply-move away, entries capped in length.
inline std::vector<std::vector<Word>> nielsen_neighbors(const std::vector<Word>& t, const FreeProductBasis& basis, int length_cap) {
    std::vector<std::vector<Word>> out;
    for (size_t i = 0; i < t.size(); ++i) {
        for (size_t j = 0; j < t.size(); ++j) {
            if (i == j) continue;
            for (int sign : {1, -1}) {
                Word gj = sign == 1 ? t[j] : t[j].inverse(basis);
                for (int side : {0, 1}) {
                    Word ni = side == 0 ? multiply(t[i], gj, basis) : multiply(gj, t[i], basis);
                    if (ni.length() > length_cap) continue;
                    auto nt = t;
                    nt[i] = ni;
                    out.push_back(canonical_tuple_form(std::move(nt), basis));
                }
            }
        }
    }
    return out;
}

// Bidirectional BFS over multiply-moves; permutations and inversions are
// free (absorbed into the canonical form). Sound for Equivalent only.
inline OracleResult bounded_nielsen_oracle(const std::vector<Word>& t1, const std::vector<Word>& t2,
                                           const FreeProductBasis& basis, int depth, int length_cap,
                                           std::size_t state_budget = 400000) {
    OracleResult res;
    if (t1.size() != t2.size()) { res.verdict = OracleVerdict::InequivalentUpToBounds; return res; }
    auto c1 = canonical_tuple_form(t1, basis), c2 = canonical_tuple_form(t2, basis);
    if (c1 == c2) { res.verdict = OracleVerdict::Equivalent; return res; }

    std::map<std::string, int> side_of; // 0 grew from t1, 1 from t2
    std::vector<std::vector<Word>> frontier[2];
    side_of[tuple_key(c1)] = 0;
    side_of[tuple_key(c2)] = 1;
    frontier[0].push_back(c1);
    frontier[1].push_back(c2);

    for (int d = 1; d <= depth; ++d) {
        int s = frontier[0].size() <= frontier[1].size() ? 0 : 1;
        std::vector<std::vector<Word>> next;
        for (const auto& t : frontier[s]) {
            for (auto& nb : nielsen_neighbors(t, basis, length_cap)) {
                std::string key = tuple_key(nb);
                auto it = side_of.find(key);
                if (it != side_of.end()) {
                    if (it->second != s) { res.verdict = OracleVerdict::Equivalent; res.depth_used = d; return res; }
                    continue;
                }
                if (side_of.size() >= state_budget) { res.verdict = OracleVerdict::BudgetExceeded; res.depth_used = d; return res; }
                side_of[key] = s;
                next.push_back(std::move(nb));
            }
        }
        frontier[s] = std::move(next);
        res.depth_used = d;
        if (frontier[s].empty() && frontier[1 - s].empty()) break;
    }
    res.verdict = OracleVerdict::InequivalentUpToBounds;
    return res;
}

// Standard candidates (x_1,..,x_f, s_1^{v_1},..,s_r^{v_r}, 1,..) for nu recovery.
inline std::vector<std::pair<std::vector<std::int64_t>, std::vector<Word>>>
standard_candidates(const FreeProductBasis& basis, int size) {
    std::vector<std::vector<std::int64_t>> nu_choices{{}};
    for (int f = 0; f < basis.size(); ++f) {
        if (!basis.is_torsion(f)) continue;
        std::int64_t m = basis.order_of(f);
        std::vector<std::vector<std::int64_t>> next;
        for (std::int64_t v = 1; 2 * v <= m; ++v) {
            if (std::gcd(v, m) != 1) continue;
            for (auto nu : nu_choices) {
                nu.push_back(v);
                next.push_back(nu);
            }
        }
        nu_choices = std::move(next);
    }
    std::vector<std::pair<std::vector<std::int64_t>, std::vector<Word>>> out;
    for (const auto& nu : nu_choices) {
        std::vector<Word> t;
        int ti = 0;
        for (int f = 0; f < basis.size(); ++f)
            t.push_back(Word::letter(f, basis.is_torsion(f) ? nu[ti++] : 1, basis));
        while ((int)t.size() < size) t.push_back(Word());
        if ((int)t.size() != size) continue;
        out.push_back({nu, std::move(t)});
    }
    return out;
}

// --- bounded reduction search with witness, used for explicit reducibility runs ---

struct ReductionStep {
    std::string description;
    std::vector<Word> tuple_after;
};

struct ReductionResult {
    bool reached = false;
    std::vector<Word> tuple;
    std::vector<ReductionStep> steps; // one two-sided move per step
    int trivial_entries = 0;
    int depth = 0;
};

inline int total_length(const std::vector<Word>& t) {
    int s = 0;
    for (const auto& w : t) s += w.length();
    return s;
}

inline int trivial_entries_of(const std::vector<Word>& t) {
    int c = 0;
    for (const auto& w : t)
        if (w.is_identity()) ++c;
    return c;
}

// Beam search over two-sided moves t_i <- h1 t_i h2 with h1, h2 drawn from
// the other entries (or skipped); one move per depth level. Deterministic.
inline ReductionResult reduce_tuple_search(const std::vector<Word>& start, const FreeProductBasis& basis,
                                           int max_depth, int target_trivials,
                                           std::size_t beam_width = 64, int length_cap = 48) {
    struct State {
        std::vector<Word> tuple;
        std::vector<std::pair<std::string, std::vector<Word>>> path;
    };
    auto score = [&](const std::vector<Word>& t) {
        return total_length(t) - 64 * trivial_entries_of(t);
    };
    ReductionResult res;
    res.tuple = start;
    res.trivial_entries = trivial_entries_of(start);
    if (res.trivial_entries >= target_trivials) { res.reached = true; return res; }

    std::vector<State> beam{{start, {}}};
    std::set<std::string> seen{tuple_key(canonical_tuple_form(start, basis))};
    for (int depth = 1; depth <= max_depth; ++depth) {
        std::vector<std::pair<int, State>> cand;
        for (const auto& st : beam) {
            const auto& t = st.tuple;
            for (size_t i = 0; i < t.size(); ++i) {
                // factors: -1 = none, else entry index with sign
                for (int lj = -1; lj < (int)t.size(); ++lj)
                    for (int lsign : {1, -1}) {
                        if (lj == -1 && lsign == -1) continue;
                        if (lj == (int)i) continue;
                        for (int rj = -1; rj < (int)t.size(); ++rj)
                            for (int rsign : {1, -1}) {
                                if (rj == -1 && rsign == -1) continue;
                                if (rj == (int)i) continue;
                                if (lj == -1 && rj == -1) continue;
                                Word ni = t[i];
                                std::ostringstream desc;
                                desc << "t" << i + 1 << " <- ";
                                if (lj >= 0) {
                                    Word h = lsign == 1 ? t[lj] : t[lj].inverse(basis);
                                    ni = multiply(h, ni, basis);
                                    desc << "t" << lj + 1 << (lsign < 0 ? "^-1" : "") << " * ";
                                }
                                desc << "t" << i + 1;
                                if (rj >= 0) {
                                    Word h = rsign == 1 ? t[rj] : t[rj].inverse(basis);
                                    ni = multiply(ni, h, basis);
                                    desc << " * t" << rj + 1 << (rsign < 0 ? "^-1" : "");
                                }
                                if (ni.length() > length_cap) continue;
                                auto nt = t;
                                nt[i] = ni;
                                std::string key = tuple_key(canonical_tuple_form(nt, basis));
                                if (!seen.insert(key).second) continue;
                                State ns{std::move(nt), st.path};
                                ns.path.push_back({desc.str(), ns.tuple});
                                if (trivial_entries_of(ns.tuple) >= target_trivials) {
                                    res.reached = true;
                                    res.tuple = ns.tuple;
                                    res.trivial_entries = trivial_entries_of(ns.tuple);
                                    res.depth = depth;
                                    for (auto& [d, after] : ns.path) res.steps.push_back({d, after});
                                    return res;
                                }
                                cand.push_back({score(ns.tuple), std::move(ns)});
                            }
                    }
            }
        }
        if (cand.empty()) break;
        std::stable_sort(cand.begin(), cand.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        beam.clear();
        for (size_t k = 0; k < cand.size() && k < beam_width; ++k) beam.push_back(std::move(cand[k].second));
        res.depth = depth;
    }
    if (!beam.empty()) {
        res.tuple = beam.front().tuple;
        res.trivial_entries = trivial_entries_of(res.tuple);
        for (auto& [d, after] : beam.front().path) res.steps.push_back({d, after});
    }
    return res;
}

// Random elementary Nielsen moves (for property tests).
inline void apply_random_nielsen_moves(std::vector<Word>& t, const FreeProductBasis& basis,
                                       std::mt19937_64& rng, int count, int length_cap = 64) {
    if (t.size() < 2) return;
    std::uniform_int_distribution<size_t> pick(0, t.size() - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int c = 0; c < count; ++c) {
        size_t i = pick(rng), j = pick(rng);
        if (i == j) { t[i] = t[i].inverse(basis); continue; }
        Word gj = coin(rng) ? t[j] : t[j].inverse(basis);
        Word ni = coin(rng) ? multiply(t[i], gj, basis) : multiply(gj, t[i], basis);
        if (ni.length() <= length_cap) t[i] = ni;
    }
}

} // namespace orbfold
