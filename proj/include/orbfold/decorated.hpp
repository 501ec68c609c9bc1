#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "local_splitting.hpp"
#include "partitioned.hpp"
#include "presentation.hpp"
#include "subgroup_graph.hpp"

namespace orbfold {

// Decorated A-graph over the two-vertex splitting of an orientable small
// orbifold: finite bipartite graph with cyclic vertex subgroups, vertex
// tuples, and peripheral paths. Folds and auxiliary moves keep the
// represented partitioned-tuple class fixed.
struct DecoratedGraph {
    struct Node {
        int side = 1;                       // 1 or 2
        CyclicSub sub;                      // subgroup of Z_{m_side}
        std::vector<std::int64_t> tuple;    // T_u entries (exponents; 0 = trivial entry)
        bool alive = true;
        std::vector<int> edges;
    };
    struct Edge {
        int etype = 0;        // 0-based A-edge index
        int from = -1;        // side-1 node
        int to = -1;          // side-2 node
        std::int64_t o = 0;   // label in Z_{m1}
        std::int64_t t = 0;   // label in Z_{m2}
        bool alive = true;
    };
    struct PathStep {
        std::int64_t pre = 0; // vertex-group element before the crossing
        int edge = -1;
        int dir = +1;         // +1 crosses from->to, -1 the reverse
    };
    struct PPath {
        int start = -1;          // side-1 node
        std::vector<PathStep> steps;
        std::int64_t tail = 0;   // element at the start node closing the loop
        int boundary_index = 1;  // i, 1-based
        std::int64_t z = 1;      // winding; mu(p) = a c_i^z a^-1
    };

    const LocalSplitting* split = nullptr;
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<PPath> paths;
    int base = -1;

    explicit DecoratedGraph(const LocalSplitting& s) : split(&s) {
        base = add_node(1);
    }

    int add_node(int side) {
        Node n;
        n.side = side;
        n.sub = CyclicSub::trivial(side == 1 ? split->m1 : split->m2);
        nodes.push_back(n);
        return (int)nodes.size() - 1;
    }
    int add_edge(int etype, int from, int to, std::int64_t o, std::int64_t t) {
        Edge e;
        e.etype = etype;
        e.from = from;
        e.to = to;
        e.o = Word::norm_exp(o, split->m1);
        e.t = Word::norm_exp(t, split->m2);
        edges.push_back(e);
        int id = (int)edges.size() - 1;
        nodes[from].edges.push_back(id);
        nodes[to].edges.push_back(id);
        return id;
    }

    int degree(int n) const {
        int d = 0;
        for (int e : nodes[n].edges)
            if (edges[e].alive) ++d;
        return d;
    }
    int alive_nodes() const {
        int c = 0;
        for (const auto& n : nodes)
            if (n.alive) ++c;
        return c;
    }
    int alive_edges() const {
        int c = 0;
        for (const auto& e : edges)
            if (e.alive) ++c;
        return c;
    }

    std::int64_t side_order(int side) const { return side == 1 ? split->m1 : split->m2; }

    // rank of pi_1 of the associated graph of groups (Grushko additive)
    int pi1_rank() const {
        int b1 = alive_edges() - (alive_nodes() - 1);
        int elliptic = 0;
        for (const auto& n : nodes)
            if (n.alive && !n.sub.is_trivial()) ++elliptic;
        return b1 + elliptic;
    }

    int endpoint(const Edge& e, int dir_entering) const { return dir_entering > 0 ? e.to : e.from; }

    // --- construction from a path spec (open A-path from `at`) ---

    // Lay an A-path into fresh nodes/edges starting at a side-1 node; returns
    // the final node. Group elements go into edge labels so that all path
    // coefficients are trivial.
    int lay_apath(const LocalSplitting::APath& ap, int at, std::vector<PathStep>* record, int close_at = -1) {
        int cur = at;
        std::int64_t carry = 0;
        for (size_t i = 0; i < ap.crossings.size(); ++i) {
            const auto& c = ap.crossings[i];
            bool last = i + 1 == ap.crossings.size();
            std::int64_t pre = c.pre + carry;
            carry = 0;
            int nxt = last && close_at >= 0 ? close_at
                      : add_node(c.dir > 0 ? 2 : 1);
            int eid;
            if (c.dir > 0) {
                // crossing contributes o e t with o = pre; t filled by the next pre
                std::int64_t t = last ? Word::norm_exp(ap.tail, split->m2) : 0;
                eid = add_edge(c.etype, cur, nxt, pre, t);
                if (!last) {
                    // the following crossing's pre belongs to this edge's t label
                    carry = 0;
                    // peek: place the v2 element into this edge's t
                    edges[eid].t = Word::norm_exp(ap.crossings[i + 1].pre, split->m2);
                }
            } else {
                // reverse crossing contributes t^-1 e^-1 o^-1: mu wants pre * t^-1 ...
                std::int64_t t = Word::norm_exp(-pre, split->m2);
                std::int64_t o = last ? Word::norm_exp(-ap.tail, split->m1) : 0;
                eid = add_edge(c.etype, nxt, cur, o, t);
                if (!last) edges[eid].o = Word::norm_exp(-ap.crossings[i + 1].pre, split->m1);
            }
            if (record) record->push_back({0, eid, c.dir});
            cur = nxt;
        }
        return cur;
    }

    // --- moves ---

    // A2 on an edge direction: o_d <- b o_d with b in B of the direction's
    // initial vertex; path coefficients compensate.
    void aux_a2(int eid, int dir, std::int64_t b) {
        Edge& e = edges[eid];
        if (dir > 0) e.o = Word::norm_exp(e.o + b, split->m1);
        else e.t = Word::norm_exp(e.t - b, split->m2);
        for (auto& p : paths) {
            for (size_t i = 0; i < p.steps.size(); ++i) {
                if (p.steps[i].edge != eid) continue;
                if (p.steps[i].dir == dir) {
                    p.steps[i].pre -= b;
                } else {
                    if (i + 1 < p.steps.size()) p.steps[i + 1].pre += b;
                    else p.tail += b;
                }
            }
        }
    }

    // A0 at a node: conjugating by g in the (abelian) vertex group shifts
    // incident labels; tuples, subgroups and interior path coefficients are
    // untouched.
    void aux_a0(int n, std::int64_t g) {
        for (int eid : nodes[n].edges) {
            if (!edges[eid].alive) continue;
            Edge& e = edges[eid];
            if (nodes[n].side == 1 && e.from == n) e.o = Word::norm_exp(e.o + g, split->m1);
            else if (nodes[n].side == 2 && e.to == n) e.t = Word::norm_exp(e.t - g, split->m2);
        }
    }

    void retarget_paths(int gone, int keep) {
        for (auto& p : paths)
            if (p.start == gone) p.start = keep;
    }

    void merge_nodes(int keep, int gone) {
        if (keep == gone) return;
        for (int eid : nodes[gone].edges) {
            if (!edges[eid].alive) continue;
            Edge& e = edges[eid];
            if (e.from == gone) e.from = keep;
            if (e.to == gone) e.to = keep;
            nodes[keep].edges.push_back(eid);
        }
        nodes[keep].sub.join(nodes[gone].sub);
        std::int64_t m = side_order(nodes[keep].side);
        for (auto x : nodes[gone].tuple) nodes[keep].tuple.push_back(Word::norm_exp(x, m));
        retarget_paths(gone, keep);
        if (gone == base) base = keep;
        nodes[gone].alive = false;
        nodes[gone].edges.clear();
    }

    // Replace every crossing of `gone` by `keep` (labels already equal),
    // inserting the IIIA correction b on the side-2 end (delta_t) or side-1
    // end (delta_o).
    void rewrite_path_edge(int gone, int keep, std::int64_t delta_o, std::int64_t delta_t) {
        for (auto& p : paths) {
            for (size_t i = 0; i < p.steps.size(); ++i) {
                if (p.steps[i].edge != gone) continue;
                p.steps[i].edge = keep;
                if (p.steps[i].dir > 0) {
                    p.steps[i].pre += delta_o;
                    if (i + 1 < p.steps.size()) p.steps[i + 1].pre += delta_t;
                    else p.tail += delta_t;
                } else {
                    p.steps[i].pre -= delta_t;
                    if (i + 1 < p.steps.size()) p.steps[i + 1].pre -= delta_o;
                    else p.tail -= delta_o;
                }
            }
        }
    }

    struct FoldMove {
        int e1 = -1, e2 = -1;
        int side = 1;       // 1: fold at the shared side-1 vertex, 2: shared side-2 vertex
        bool is_iiia = false;
    };

    bool fold_applicable(int e1, int e2, int side) const {
        const Edge& a = edges[e1];
        const Edge& b = edges[e2];
        if (!a.alive || !b.alive || e1 == e2) return false;
        if (a.etype != b.etype) return false;
        if (side == 1) {
            if (a.from != b.from) return false;
            return nodes[a.from].sub.contains(a.o - b.o);
        }
        if (a.to != b.to) return false;
        return nodes[a.to].sub.contains(a.t - b.t);
    }

    std::vector<FoldMove> applicable_folds() const {
        std::vector<FoldMove> out;
        for (size_t i = 0; i < edges.size(); ++i) {
            if (!edges[i].alive) continue;
            for (size_t j = i + 1; j < edges.size(); ++j) {
                if (!edges[j].alive) continue;
                if (fold_applicable((int)i, (int)j, 1)) {
                    FoldMove m{(int)i, (int)j, 1, edges[i].to == edges[j].to};
                    out.push_back(m);
                }
                if (fold_applicable((int)i, (int)j, 2) && edges[i].from != edges[j].from) {
                    FoldMove m{(int)i, (int)j, 2, false};
                    out.push_back(m);
                }
                // same from & same to with side-2 coset match but not side-1:
                // that is the side-2 IIIA
                if (fold_applicable((int)i, (int)j, 2) && edges[i].from == edges[j].from &&
                    !fold_applicable((int)i, (int)j, 1)) {
                    FoldMove m{(int)i, (int)j, 2, true};
                    out.push_back(m);
                }
            }
        }
        return out;
    }

    bool is_folded() const { return applicable_folds().empty(); }

    // Apply an elementary fold (with its auxiliary preparation). The class
    // of the represented partitioned tuple is preserved.
    void apply_fold(const FoldMove& m) {
        int e1 = m.e1, e2 = m.e2;
        if (!fold_applicable(e1, e2, m.side)) throw std::domain_error("fold preconditions violated");
        if (m.side == 1) {
            // A2 on e2 makes o labels equal
            std::int64_t beta = Word::norm_exp(edges[e1].o - edges[e2].o, split->m1);
            if (beta) aux_a2(e2, +1, beta);
            if (edges[e1].to == edges[e2].to) {
                // IIIA: add b = t1^-1 t2 to the terminal vertex
                std::int64_t b = Word::norm_exp(edges[e2].t - edges[e1].t, split->m2);
                int y = edges[e1].to;
                rewrite_path_edge(e2, e1, 0, b);
                edges[e2].alive = false;
                nodes[y].sub.add(b);
                nodes[y].tuple.push_back(b);
            } else {
                // IA: A0 at e2.to aligns t labels, then merge
                int y1 = edges[e1].to, y2 = edges[e2].to;
                std::int64_t gamma = Word::norm_exp(edges[e2].t - edges[e1].t, split->m2);
                if (gamma) aux_a0(y2, gamma);
                rewrite_path_edge(e2, e1, 0, 0);
                edges[e2].alive = false;
                merge_nodes(y1, y2);
            }
        } else {
            std::int64_t beta = Word::norm_exp(edges[e2].t - edges[e1].t, split->m2);
            if (beta) aux_a2(e2, -1, beta);
            if (edges[e1].from == edges[e2].from) {
                std::int64_t b = Word::norm_exp(edges[e2].o - edges[e1].o, split->m1);
                int x = edges[e1].from;
                rewrite_path_edge(e2, e1, b, 0);
                edges[e2].alive = false;
                nodes[x].sub.add(b);
                nodes[x].tuple.push_back(b);
            } else {
                int x1 = edges[e1].from, x2 = edges[e2].from;
                // A0 at a side-1 node; prefer shifting a non-base node
                if (x2 != base) {
                    std::int64_t gamma = Word::norm_exp(edges[e1].o - edges[e2].o, split->m1);
                    if (gamma) aux_a0(x2, gamma);
                } else {
                    std::int64_t gamma = Word::norm_exp(edges[e2].o - edges[e1].o, split->m1);
                    if (gamma) aux_a0(x1, gamma);
                }
                rewrite_path_edge(e2, e1, 0, 0);
                edges[e2].alive = false;
                int keep = x1 == base || x2 == base ? base : x1;
                int gone = keep == x1 ? x2 : x1;
                merge_nodes(keep, gone);
            }
        }
    }

    // --- core ---

    bool path_crosses_node(int n) const {
        for (const auto& p : paths) {
            if (p.start == n) return true;
            for (const auto& s : p.steps) {
                const Edge& e = edges[s.edge];
                if (e.from == n || e.to == n) return true;
            }
        }
        return false;
    }

    // Iteratively delete valence-1 vertices with trivial vertex group;
    // trivial tuple entries migrate to the base.
    void core_based() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t n = 0; n < nodes.size(); ++n) {
                if (!nodes[n].alive || (int)n == base) continue;
                if (degree((int)n) != 1 || !nodes[n].sub.is_trivial()) continue;
                if (path_crosses_node((int)n)) continue;
                for (auto x : nodes[n].tuple) {
                    if (Word::norm_exp(x, side_order(nodes[n].side)) != 0)
                        throw std::logic_error("core strip would drop a non-trivial tuple entry");
                    nodes[base].tuple.push_back(0);
                }
                for (int e : nodes[n].edges)
                    if (edges[e].alive) edges[e].alive = false;
                nodes[n].alive = false;
                nodes[n].edges.clear();
                changed = true;
            }
        }
    }

    // --- square folding & local graphs ---

    bool self_folds() const {
        for (const auto& p : paths) {
            std::set<std::pair<int, int>> seen;
            for (const auto& s : p.steps)
                if (!seen.insert({s.edge, s.dir}).second) return true;
        }
        return false;
    }

    bool folds_peripheral_paths() const {
        std::map<std::pair<int, int>, std::set<int>> crossing_paths; // (edge,dir) -> path ids
        for (size_t j = 0; j < paths.size(); ++j)
            for (const auto& s : paths[j].steps)
                crossing_paths[{s.edge, s.dir}].insert((int)j);
        for (const auto& [k, js] : crossing_paths) {
            if (js.size() < 2) continue;
            for (int a : js)
                for (int b : js)
                    if (a < b && paths[a].boundary_index == paths[b].boundary_index) return true;
        }
        return false;
    }

    bool folds_squares() const { return self_folds() || folds_peripheral_paths(); }

    // Directed local graph at u. Vertices are the incident live edges
    // (directions out of u); an arc f -> g with label (path, b) records a
    // passage of a peripheral path through u.
    struct LocalGraph {
        std::vector<int> verts; // edge ids
        struct Arc { int from_edge; int to_edge; int path; std::int64_t coeff; };
        std::vector<Arc> arcs;

        int length() const { return (int)arcs.size(); }
        // components are intervals or circuits when in/out degrees stay <= 1
        bool degrees_ok() const {
            std::map<int, int> indeg, outdeg;
            for (const auto& a : arcs) { ++outdeg[a.from_edge]; ++indeg[a.to_edge]; }
            for (auto& [v, d] : indeg)
                if (d > 1) return false;
            for (auto& [v, d] : outdeg)
                if (d > 1) return false;
            return true;
        }
    };

    LocalGraph local_graph(int u) const {
        if (folds_squares()) throw std::domain_error("local graph of a square-folding decorated graph");
        LocalGraph lg;
        for (int e : nodes[u].edges)
            if (edges[e].alive) lg.verts.push_back(e);
        std::sort(lg.verts.begin(), lg.verts.end());
        lg.verts.erase(std::unique(lg.verts.begin(), lg.verts.end()), lg.verts.end());
        int side = nodes[u].side;
        for (size_t j = 0; j < paths.size(); ++j) {
            const auto& p = paths[j];
            size_t n = p.steps.size();
            for (size_t i = 0; i < n; ++i) {
                const auto& cur = p.steps[i];
                const auto& nxt = p.steps[(i + 1) % n];
                // passage through u: cur arrives at u, nxt leaves u
                int arrive = cur.dir > 0 ? edges[cur.edge].to : edges[cur.edge].from;
                if (arrive != u) continue;
                std::int64_t coeff = (i + 1 < n ? nxt.pre : Word::norm_exp(p.tail + p.steps[0].pre, side_order(side)));
                // Gamma vertices are edges f with alpha(f) = u: for side-1
                // these are out-directions (dir +1), for side-2 dir -1.
                // Arc from the edge whose *reverse* arrives, to the leaving edge.
                (void)side;
                lg.arcs.push_back({cur.edge, nxt.edge, (int)j, coeff});
            }
        }
        return lg;
    }

    bool locally_surjective_at(int u) const {
        const Node& n = nodes[u];
        std::int64_t idx = n.sub.index();
        if (idx == 0) return false;
        // direction classes: (etype, coset of o/t mod sub)
        std::set<std::pair<int, std::int64_t>> covered;
        std::int64_t d = n.sub.d == 0 ? side_order(n.side) : n.sub.d;
        for (int e : n.edges) {
            if (!edges[e].alive) continue;
            std::int64_t lab = n.side == 1 ? edges[e].o : edges[e].t;
            covered.insert({edges[e].etype, ((lab % d) + d) % d});
        }
        return (std::int64_t)covered.size() == (std::int64_t)split->q * idx;
    }

    bool locally_surjective() const {
        for (size_t n = 0; n < nodes.size(); ++n)
            if (nodes[n].alive && !locally_surjective_at((int)n)) return false;
        return true;
    }

    // number of fold-equivalence classes of edges at u
    int fold_classes(int u) const {
        std::vector<int> eids;
        for (int e : nodes[u].edges)
            if (edges[e].alive) eids.push_back(e);
        std::sort(eids.begin(), eids.end());
        eids.erase(std::unique(eids.begin(), eids.end()), eids.end());
        int classes = 0;
        std::vector<bool> used(eids.size(), false);
        for (size_t i = 0; i < eids.size(); ++i) {
            if (used[i]) continue;
            ++classes;
            for (size_t j = i + 1; j < eids.size(); ++j) {
                if (used[j]) continue;
                const Edge& a = edges[eids[i]];
                const Edge& b = edges[eids[j]];
                if (a.etype != b.etype) continue;
                std::int64_t diff = nodes[u].side == 1 ? a.o - b.o : a.t - b.t;
                if (nodes[u].sub.contains(diff)) used[j] = true;
            }
        }
        return classes;
    }

    int foldability_at(int u) const { return degree(u) - fold_classes(u); }

    int foldability() const {
        // fold of the unbased core of the underlying A-graph
        DecoratedGraph c = *this;
        c.core_unbased();
        int total = 0;
        for (size_t n = 0; n < c.nodes.size(); ++n)
            if (c.nodes[n].alive) total += c.foldability_at((int)n);
        return total;
    }

    void core_unbased() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t n = 0; n < nodes.size(); ++n) {
                if (!nodes[n].alive) continue;
                if (degree((int)n) != 1 || !nodes[n].sub.is_trivial()) continue;
                if (path_crosses_node((int)n)) continue;
                for (int e : nodes[n].edges)
                    if (edges[e].alive) edges[e].alive = false;
                nodes[n].alive = false;
                nodes[n].edges.clear();
                changed = true;
            }
        }
    }

    // mu of a stored peripheral path as a piece-basis word
    Word path_mu(const PPath& p) const {
        LocalSplitting::APath ap;
        std::int64_t pending = 0;
        int sideq = 1;
        for (const auto& s : p.steps) {
            const Edge& e = edges[s.edge];
            if (s.dir > 0) {
                ap.crossings.push_back({pending + s.pre + e.o, e.etype, +1});
                pending = e.t;
                sideq = 2;
            } else {
                ap.crossings.push_back({pending + s.pre - e.t, e.etype, -1});
                pending = -e.o;
                sideq = 1;
            }
        }
        (void)sideq;
        ap.tail = pending + p.tail;
        split->reduce_apath(ap);
        return split->apath_to_word(ap);
    }
};

} // namespace orbfold
