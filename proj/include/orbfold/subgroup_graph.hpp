#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "word.hpp"

namespace orbfold {

// Subgroup <y^d> of a cyclic group of order m (m == 0 means infinite).
// Stored normalized: m > 0 keeps d in [0, m) with d | m, and d == 0 encodes
// the trivial subgroup in both cases.
struct CyclicSub {
    std::int64_t d = 0;
    std::int64_t m = 0;

    static CyclicSub trivial(std::int64_t order) { return {0, order}; }
    static CyclicSub generated(std::int64_t e, std::int64_t order) {
        CyclicSub s{0, order};
        s.add(e);
        return s;
    }

    bool is_trivial() const { return d == 0; }
    bool is_full() const { return d == 1; }

    void add(std::int64_t e) {
        if (m > 0) e = ((e % m) + m) % m;
        if (e == 0) return;
        std::int64_t g = d == 0 ? (e < 0 ? -e : e) : std::gcd(d, e < 0 ? -e : e);
        if (m > 0) g = std::gcd(g, m) % m; // gcd == m collapses to trivial
        d = g;
    }

    void join(const CyclicSub& o) { if (o.d) add(o.d); }

    bool contains(std::int64_t e) const {
        if (m > 0) e = ((e % m) + m) % m;
        if (e == 0) return true;
        return d != 0 && e % d == 0;
    }

    // Index in the full cyclic group; 0 means infinite.
    std::int64_t index() const {
        if (d == 0) return m == 0 ? 0 : m;
        return d;
    }
    // Order of the subgroup; 0 means infinite.
    std::int64_t order() const {
        if (d == 0) return 1;
        return m == 0 ? 0 : m / d;
    }
};

// Folded graph for a finitely generated subgroup of a free product of
// cyclics, over the splitting with one trivial central vertex per "sheet"
// and one leaf vertex per cyclic factor met there. Optionally tracks vertex
// tuples so that the represented Nielsen class is preserved through folds.
struct StarGraph {
    struct Node {
        bool is_center = true;
        int factor = -1;                     // leaves only
        CyclicSub sub;                       // leaves only
        std::vector<std::int64_t> tuple;     // leaf tuple entries (exponents); 0 = trivial entry
        int trivial_count = 0;               // parked trivial entries (centers)
        bool alive = true;
        std::vector<int> edges;
    };
    struct Edge {
        int center = -1, leaf = -1;
        std::int64_t t = 0; // leaf-side label exponent
        bool alive = true;
    };

    const FreeProductBasis* basis = nullptr;
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    int base = -1;
    bool track_tuples = false;

    explicit StarGraph(const FreeProductBasis& b, bool tuples = false) : basis(&b), track_tuples(tuples) {
        base = add_center();
    }

    int add_center() {
        Node n;
        n.is_center = true;
        nodes.push_back(n);
        return (int)nodes.size() - 1;
    }
    int add_leaf(int factor) {
        Node n;
        n.is_center = false;
        n.factor = factor;
        n.sub = CyclicSub::trivial(basis->order_of(factor));
        nodes.push_back(n);
        return (int)nodes.size() - 1;
    }
    int add_edge(int center, int leaf, std::int64_t t) {
        t = Word::norm_exp(t, basis->order_of(nodes[leaf].factor));
        Edge e{center, leaf, t, true};
        edges.push_back(e);
        int id = (int)edges.size() - 1;
        nodes[center].edges.push_back(id);
        nodes[leaf].edges.push_back(id);
        return id;
    }

    // Attach a loop at the base spelling w: per syllable y^k an in-edge with
    // label 0 and an out-edge with label k, through a fresh leaf.
    void add_loop(const Word& w) {
        if (w.is_identity()) {
            nodes[base].trivial_count += 1;
            return;
        }
        int cur = base;
        for (size_t i = 0; i < w.syls.size(); ++i) {
            int leaf = add_leaf(w.syls[i].factor);
            int nxt = (i + 1 == w.syls.size()) ? base : add_center();
            add_edge(cur, leaf, 0);
            add_edge(nxt, leaf, w.syls[i].exp);
            cur = nxt;
        }
    }

    int degree(int node) const {
        int d = 0;
        for (int e : nodes[node].edges)
            if (edges[e].alive) ++d;
        return d;
    }

    void merge_centers(int keep, int gone) {
        if (keep == gone) return;
        for (int e : nodes[gone].edges) {
            if (!edges[e].alive) continue;
            edges[e].center = keep;
            nodes[keep].edges.push_back(e);
        }
        nodes[keep].trivial_count += nodes[gone].trivial_count;
        if (gone == base) base = keep;
        nodes[gone].alive = false;
        nodes[gone].edges.clear();
    }

    // A0-shift leaf `gone` so its labels match, then merge into `keep`.
    void merge_leaves(int keep, int gone, std::int64_t shift) {
        if (keep == gone) return;
        int m = (int)basis->order_of(nodes[keep].factor);
        for (int e : nodes[gone].edges) {
            if (!edges[e].alive) continue;
            edges[e].leaf = keep;
            edges[e].t = Word::norm_exp(edges[e].t + shift, m);
            nodes[keep].edges.push_back(e);
        }
        nodes[keep].sub.join(nodes[gone].sub);
        if (track_tuples)
            for (auto x : nodes[gone].tuple) nodes[keep].tuple.push_back(Word::norm_exp(x, m));
        nodes[gone].alive = false;
        nodes[gone].edges.clear();
    }

    // One fold pass; returns true if anything changed.
    bool fold_step() {
        // parallel edges (same center, same leaf): IIIA, may grow the leaf group
        for (size_t i = 0; i < edges.size(); ++i) {
            if (!edges[i].alive) continue;
            for (int e2 : nodes[edges[i].center].edges) {
                if ((size_t)e2 <= i || !edges[e2].alive) continue;
                if (edges[e2].leaf != edges[i].leaf || edges[e2].center != edges[i].center) continue;
                std::int64_t delta = edges[e2].t - edges[i].t;
                Node& u = nodes[edges[i].leaf];
                if (track_tuples)
                    u.tuple.push_back(Word::norm_exp(delta, basis->order_of(u.factor)));
                u.sub.add(delta);
                edges[e2].alive = false;
                return true;
            }
        }
        // two same-factor edges at one center: IA merging the leaves
        for (size_t n = 0; n < nodes.size(); ++n) {
            if (!nodes[n].alive || !nodes[n].is_center) continue;
            std::map<int, int> by_factor;
            for (int e : nodes[n].edges) {
                if (!edges[e].alive) continue;
                int f = nodes[edges[e].leaf].factor;
                auto it = by_factor.find(f);
                if (it == by_factor.end()) { by_factor[f] = e; continue; }
                int e1 = it->second, e2 = e;
                if (edges[e1].leaf == edges[e2].leaf) continue; // parallel, handled above
                merge_leaves(edges[e1].leaf, edges[e2].leaf, edges[e1].t - edges[e2].t);
                edges[e2].alive = false; // IA identifies the trigger edges
                return true;
            }
        }
        // two edges at one leaf in the same B_u-coset: IA merging the centers
        for (size_t n = 0; n < nodes.size(); ++n) {
            if (!nodes[n].alive || nodes[n].is_center) continue;
            const CyclicSub& sub = nodes[n].sub;
            for (size_t a = 0; a < nodes[n].edges.size(); ++a) {
                int e1 = nodes[n].edges[a];
                if (!edges[e1].alive || edges[e1].leaf != (int)n) continue;
                for (size_t b = a + 1; b < nodes[n].edges.size(); ++b) {
                    int e2 = nodes[n].edges[b];
                    if (!edges[e2].alive || edges[e2].leaf != (int)n) continue;
                    if (edges[e1].center == edges[e2].center) continue; // parallel
                    if (!sub.contains(edges[e1].t - edges[e2].t)) continue;
                    // A2 on e2 makes labels equal; IA merges the centers and
                    // identifies the trigger edges
                    merge_centers(edges[e1].center, edges[e2].center);
                    edges[e2].alive = false;
                    return true;
                }
            }
        }
        return false;
    }

    void fold() { while (fold_step()) {} }

    // Remove valence-1 vertices with trivial group (never the base); parked
    // trivial tuple entries migrate to the base.
    void core_based() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t n = 0; n < nodes.size(); ++n) {
                if (!nodes[n].alive || (int)n == base) continue;
                if (degree((int)n) != 1) continue;
                if (!nodes[n].is_center && !nodes[n].sub.is_trivial()) continue;
                if (!nodes[n].is_center && track_tuples) {
                    for (auto x : nodes[n].tuple)
                        if (Word::norm_exp(x, basis->order_of(nodes[n].factor)) != 0)
                            throw std::logic_error("core strip would drop a non-trivial tuple entry");
                    nodes[base].trivial_count += (int)nodes[n].tuple.size();
                    nodes[n].tuple.clear();
                }
                if (nodes[n].is_center) {
                    nodes[base].trivial_count += nodes[n].trivial_count;
                    nodes[n].trivial_count = 0;
                }
                for (int e : nodes[n].edges)
                    if (edges[e].alive) edges[e].alive = false;
                nodes[n].alive = false;
                nodes[n].edges.clear();
                changed = true;
            }
        }
    }

    // --- queries on a folded graph ---

    std::optional<int> center_edge(int center, int factor) const {
        for (int e : nodes[center].edges)
            if (edges[e].alive && edges[e].center == center && nodes[edges[e].leaf].factor == factor)
                return e;
        return std::nullopt;
    }

    // Deterministic trace of one syllable from a center. Returns the next
    // center, or nullopt when the path leaves the graph.
    std::optional<int> step(int center, int factor, std::int64_t exp) const {
        auto ein = center_edge(center, factor);
        if (!ein) return std::nullopt;
        const Node& u = nodes[edges[*ein].leaf];
        std::int64_t acc = edges[*ein].t + exp;
        for (int e : u.edges) {
            if (!edges[e].alive || edges[e].leaf != edges[*ein].leaf) continue;
            if (u.sub.contains(acc - edges[e].t)) return edges[e].center;
        }
        return std::nullopt;
    }

    std::optional<int> trace(const Word& w, int start) const {
        int cur = start;
        for (const auto& s : w.syls) {
            auto nxt = step(cur, s.factor, s.exp);
            if (!nxt) return std::nullopt;
            cur = *nxt;
        }
        return cur;
    }

    bool contains(const Word& w) const {
        auto end = trace(w, base);
        return end && *end == base;
    }

    // Complete the core to the full cover by growing the forced hanging
    // sheets. Returns nullopt when the cover is infinite (or exceeds the
    // center budget).
    std::optional<StarGraph> completed(int center_budget = 4096) const {
        StarGraph full = *this;
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t n = 0; n < full.nodes.size(); ++n) {
                if (!full.nodes[n].alive) continue;
                if (full.nodes[n].is_center) {
                    for (int f = 0; f < full.basis->size(); ++f) {
                        if (full.center_edge((int)n, f)) continue;
                        int leaf = full.add_leaf(f);
                        full.add_edge((int)n, leaf, 0);
                        changed = true;
                    }
                } else {
                    std::int64_t idx = full.nodes[n].sub.index();
                    if (idx == 0) return std::nullopt; // infinite cyclic direction
                    while (full.degree((int)n) < idx) {
                        std::int64_t d = full.nodes[n].sub.d == 0 ? full.nodes[n].sub.m : full.nodes[n].sub.d;
                        std::set<std::int64_t> used;
                        for (int e : full.nodes[n].edges)
                            if (full.edges[e].alive) used.insert(((full.edges[e].t % d) + d) % d);
                        std::int64_t r = 0;
                        while (used.count(r)) ++r;
                        int c = full.add_center();
                        full.add_edge(c, (int)n, r);
                        if (full.center_count() > center_budget) return std::nullopt;
                        changed = true;
                    }
                }
            }
        }
        return full;
    }

    bool locally_surjective() const {
        for (size_t n = 0; n < nodes.size(); ++n) {
            if (!nodes[n].alive) continue;
            if (nodes[n].is_center) {
                for (int f = 0; f < basis->size(); ++f)
                    if (!center_edge((int)n, f)) return false;
            } else {
                std::int64_t idx = nodes[n].sub.index();
                if (idx == 0) return false;
                if ((std::int64_t)degree((int)n) != idx) return false;
            }
        }
        return true;
    }

    int center_count() const {
        int c = 0;
        for (const auto& n : nodes)
            if (n.alive && n.is_center) ++c;
        return c;
    }

    // |G : H|, 0 when infinite. Valid on a folded graph.
    std::int64_t index() const {
        if (locally_surjective()) return center_count();
        auto full = completed();
        return full ? full->center_count() : 0;
    }

    bool is_whole_group() const {
        if (!locally_surjective()) return false;
        if (center_count() != 1) return false;
        for (const auto& n : nodes)
            if (n.alive && !n.is_center && !n.sub.is_full()) return false;
        int leaves = 0;
        for (const auto& n : nodes)
            if (n.alive && !n.is_center) ++leaves;
        return leaves == basis->size();
    }

    int alive_edge_count() const {
        int c = 0;
        for (const auto& e : edges)
            if (e.alive) ++c;
        return c;
    }
    int alive_node_count() const {
        int c = 0;
        for (const auto& n : nodes)
            if (n.alive) ++c;
        return c;
    }

    // Kurosh rank of the represented subgroup: free part (graph betti number)
    // plus one per leaf with non-trivial group.
    int kurosh_rank() const {
        int b1 = alive_edge_count() - (alive_node_count() - 1);
        int elliptic = 0;
        for (const auto& n : nodes)
            if (n.alive && !n.is_center && !n.sub.is_trivial()) ++elliptic;
        return b1 + elliptic;
    }

    // Spanning tree from the base; parent edge ids per node (-1 at base).
    std::vector<int> spanning_tree() const {
        std::vector<int> parent_edge(nodes.size(), -2);
        std::vector<int> queue{base};
        parent_edge[base] = -1;
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int n = queue[qi];
            for (int e : nodes[n].edges) {
                if (!edges[e].alive) continue;
                int other = edges[e].center == n ? edges[e].leaf : edges[e].center;
                if (parent_edge[other] != -2) continue;
                parent_edge[other] = e;
                queue.push_back(other);
            }
        }
        return parent_edge;
    }

    // Word of the tree path from base to a center.
    Word path_word(int center, const std::vector<int>& parent_edge) const {
        std::vector<std::pair<int, std::int64_t>> rev; // (factor, exp) from node up
        int cur = center;
        while (cur != base) {
            int e_up = parent_edge[cur]; // edge toward parent
            if (e_up < 0) break;
            if (nodes[cur].is_center) {
                // parent is a leaf entered via e_up; exit label is t of e_up,
                // in label is t of the leaf's own parent edge
                int leaf = edges[e_up].leaf;
                int e_in = parent_edge[leaf];
                std::int64_t contrib = edges[e_up].t - edges[e_in].t;
                rev.push_back({nodes[leaf].factor, contrib});
                cur = edges[e_in].center;
            } else {
                cur = edges[e_up].center;
            }
        }
        Word w;
        for (auto it = rev.rbegin(); it != rev.rend(); ++it)
            w.push_syl(it->first, it->second, *basis);
        return w;
    }

    struct KuroshBasis {
        std::vector<Word> free_part;
        std::vector<Word> elliptic_part; // u y^d u^-1 per non-trivial leaf
        std::vector<int> elliptic_leaf;  // leaf node id per elliptic generator
    };

    KuroshBasis kurosh_basis() const {
        KuroshBasis kb;
        auto parent = spanning_tree();
        for (size_t e = 0; e < edges.size(); ++e) {
            if (!edges[e].alive) continue;
            int leaf = edges[e].leaf, center = edges[e].center;
            if (parent[leaf] == (int)e || parent[center] == (int)e) continue; // tree edge
            // loop: base -> center, cross e into leaf, up through the leaf's tree edge
            int e_tree = parent[leaf];
            // the leaf's tree edge goes toward the parent center
            std::int64_t contrib = edges[e_tree].t - edges[e].t;
            Word w = path_word(center, parent);
            w.push_syl(nodes[leaf].factor, contrib, *basis);
            Word back = path_word(edges[e_tree].center, parent).inverse(*basis);
            kb.free_part.push_back(multiply(w, back, *basis));
        }
        for (size_t n = 0; n < nodes.size(); ++n) {
            if (!nodes[n].alive || nodes[n].is_center || nodes[n].sub.is_trivial()) continue;
            int e_tree = parent[n];
            Word u = path_word(edges[e_tree].center, parent);
            Word g = Word::letter(nodes[n].factor, nodes[n].sub.d, *basis);
            kb.elliptic_part.push_back(g.conjugate(u, *basis));
            kb.elliptic_leaf.push_back((int)n);
        }
        return kb;
    }

    // One boundary component of the cover corresponding to this subgroup,
    // over the boundary word c (finite-index graphs only).
    struct BoundaryComponent {
        int boundary_index = 0; // 1-based, caller-assigned
        std::int64_t degree = 0;
        Word coset_rep;          // o with the component subgroup o <c^degree> o^-1
    };

    std::vector<BoundaryComponent> boundary_census(const std::vector<Word>& boundary_words) const {
        if (!locally_surjective()) {
            auto full = completed();
            if (!full) throw std::domain_error("boundary census requires a finite-index subgroup");
            return full->boundary_census(boundary_words);
        }
        auto parent = spanning_tree();
        std::vector<int> centers;
        for (size_t n = 0; n < nodes.size(); ++n)
            if (nodes[n].alive && nodes[n].is_center) centers.push_back((int)n);
        std::vector<BoundaryComponent> out;
        for (size_t bi = 0; bi < boundary_words.size(); ++bi) {
            std::set<int> seen;
            for (int c0 : centers) {
                if (seen.count(c0)) continue;
                std::int64_t deg = 0;
                int cur = c0;
                do {
                    seen.insert(cur);
                    auto nxt = trace(boundary_words[bi], cur);
                    if (!nxt) throw std::logic_error("boundary trace fell off a locally surjective graph");
                    cur = *nxt;
                    ++deg;
                } while (cur != c0);
                BoundaryComponent comp;
                comp.boundary_index = (int)bi + 1;
                comp.degree = deg;
                comp.coset_rep = path_word(c0, parent).inverse(*basis);
                out.push_back(comp);
            }
        }
        return out;
    }
};

inline StarGraph subgroup_graph(const std::vector<Word>& gens, const FreeProductBasis& basis, bool track_tuples = false) {
    StarGraph g(basis, track_tuples);
    for (const auto& w : gens) g.add_loop(w);
    g.fold();
    g.core_based();
    return g;
}

// Smallest z > 0 with o c^z o^-1 in H, or 0 when the intersection is trivial.
inline std::int64_t cyclic_intersection_index(const Word& o, const Word& c, const StarGraph& H, const FreeProductBasis& basis) {
    if (c.is_identity()) throw std::invalid_argument("cyclic intersection against the trivial element");
    auto [core, u] = c.cyclically_reduced(basis);
    Word w = multiply(o, u, basis);
    Word chat = core;
    // absorb w-suffix syllables interacting with either end of chat
    while (!w.is_identity() && !chat.is_identity()) {
        int wf = w.syls.back().factor;
        if (chat.length() >= 1 && (chat.syls.front().factor == wf || chat.syls.back().factor == wf)) {
            Word s = Word::letter(w.syls.back().factor, w.syls.back().exp, basis);
            w.syls.pop_back();
            chat = multiply(multiply(s, chat, basis), s.inverse(basis), basis).cyclically_reduced(basis).first;
            if (chat.is_identity()) return 0; // c was trivial after all
        } else break;
    }
    if (chat.length() == 1 && basis.is_torsion(chat.syls[0].factor)) {
        // elliptic core: finite cyclic, test divisor-bounded powers
        std::int64_t m = basis.order_of(chat.syls[0].factor);
        std::int64_t n = m / std::gcd(m, chat.syls[0].exp);
        for (std::int64_t z = 1; z <= n; ++z) {
            Word probe = chat.pow(z, basis).conjugate(w, basis);
            if (H.contains(probe)) return z;
        }
        return 0;
    }
    if (chat.length() == 1) {
        // infinite elliptic core a^k: solve the label congruence at the a-leaf
        std::int64_t k = chat.syls[0].exp;
        int factor = chat.syls[0].factor;
        auto sigma = H.trace(w, H.base);
        if (!sigma) return 0;
        auto ein = H.center_edge(*sigma, factor);
        if (!ein) return 0;
        const auto& leaf = H.nodes[H.edges[*ein].leaf];
        std::int64_t t0 = H.edges[*ein].t;
        Word winv = w.inverse(basis);
        std::int64_t best = 0;
        for (int e : leaf.edges) {
            if (!H.edges[e].alive || H.edges[e].leaf != H.edges[*ein].leaf) continue;
            std::int64_t rhs = H.edges[e].t - t0;
            std::int64_t z = 0;
            if (leaf.sub.is_trivial()) {
                if (rhs % k != 0) continue;
                z = rhs / k;
                if (z <= 0) continue;
            } else {
                std::int64_t d = leaf.sub.d;
                std::int64_t g = std::gcd(((k % d) + d) % d, d);
                if (g == 0) g = d;
                std::int64_t r = ((rhs % d) + d) % d;
                if (r % g != 0) continue;
                // minimal positive z with k z == rhs (mod d)
                std::int64_t zz = 0;
                bool found = false;
                for (zz = 1; zz <= d; ++zz)
                    if ((((k * zz - rhs) % d) + d) % d == 0) { found = true; break; }
                if (!found) continue;
                z = zz;
            }
            auto closed = H.trace(winv, H.edges[e].center);
            if (closed && *closed == H.base) {
                if (best == 0 || z < best) best = z;
            }
        }
        return best;
    }
    // hyperbolic core: deterministic center walk with cycle detection
    auto sigma = H.trace(w, H.base);
    if (!sigma) return 0;
    Word winv = w.inverse(basis);
    std::vector<int> seen{*sigma};
    int cur = *sigma;
    for (std::int64_t z = 1;; ++z) {
        auto nxt = H.trace(chat, cur);
        if (!nxt) return 0;
        cur = *nxt;
        auto closed = H.trace(winv, cur);
        if (closed && *closed == H.base) return z;
        if (std::find(seen.begin(), seen.end(), cur) != seen.end()) return 0;
        seen.push_back(cur);
    }
}

} // namespace orbfold
