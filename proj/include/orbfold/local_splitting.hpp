#pragma once

#include <stdexcept>
#include <vector>

#include "signature.hpp"
#include "word.hpp"

namespace orbfold {

// The two-vertex splitting of an orientable small orbifold: vertices v1, v2
// with cyclic groups of orders m1, m2 (order 1 = trivial), q parallel edges
// e_1..e_q with trivial edge groups. The piece group is identified with the
// free product on s1 (= s_{v1}), sg2 (= e1 s_{v2} e1^-1) and x_2..x_q
// (= e_i e_1^-1).
struct LocalSplitting {
    OrbifoldSignature sig;
    int q = 0;
    std::int64_t m1 = 1, m2 = 1;
    FreeProductBasis basis;
    int f_s1 = -1, f_s2 = -1;
    std::vector<int> f_x; // f_x[i-2] is the factor of x_i, i = 2..q

    std::vector<Word> boundary; // c_1..c_q in the basis

    explicit LocalSplitting(const OrbifoldSignature& s) : sig(s) {
        if (!s.is_small() || !s.orientable)
            throw std::invalid_argument("local splitting requires an orientable small orbifold");
        if (s.boundary == 1) { q = 1; m1 = s.cone_orders[0]; m2 = s.cone_orders[1]; }
        else if (s.boundary == 2) { q = 2; m1 = s.cone_orders[0]; m2 = 1; }
        else { q = 3; m1 = 1; m2 = 1; }
        if (m1 > 1) f_s1 = basis.add("s1", (int)m1, FactorRole::Torsion);
        if (m2 > 1) f_s2 = basis.add("s2", (int)m2, FactorRole::Torsion);
        for (int i = 2; i <= q; ++i) f_x.push_back(basis.add("x" + std::to_string(i), 0, FactorRole::Boundary));

        // c_1 = s1 sg2 x2^-1, c_i = x_i x_{i+1}^-1 (x_{q+1} = 1)
        for (int i = 1; i <= q; ++i) {
            Word c;
            if (i == 1) {
                if (f_s1 >= 0) c.push_syl(f_s1, 1, basis);
                if (f_s2 >= 0) c.push_syl(f_s2, 1, basis);
                if (q >= 2) c.push_syl(f_x[0], -1, basis);
            } else {
                c.push_syl(f_x[i - 2], 1, basis);
                if (i + 1 <= q) c.push_syl(f_x[i - 1], -1, basis);
            }
            boundary.push_back(c);
        }
    }

    std::int64_t order_of_side(int side) const { return side == 1 ? m1 : m2; }

    // One crossing of the underlying A-graph, preceded by a vertex element.
    struct Crossing {
        std::int64_t pre;  // element of the current vertex group, before crossing
        int etype;         // 0-based edge index
        int dir;           // +1: v1 -> v2, -1: v2 -> v1
    };
    struct APath {
        std::vector<Crossing> crossings;
        std::int64_t tail = 0; // element of the final vertex group
    };

    // A-path from v1 spelling a basis word.
    APath word_to_apath(const Word& w) const {
        APath p;
        std::int64_t pending = 0; // current vertex element; starts at v1
        int side = 1;
        auto flush_cross = [&](int etype, int dir) {
            p.crossings.push_back({pending, etype, dir});
            pending = 0;
            side = dir > 0 ? 2 : 1;
        };
        for (const auto& s : w.syls) {
            if (s.factor == f_s1) {
                if (side == 2) { flush_cross(0, -1); }
                pending += s.exp;
            } else if (s.factor == f_s2) {
                if (side == 1) flush_cross(0, +1);
                pending += s.exp;
            } else {
                int i = 0;
                while (i < (int)f_x.size() && f_x[i] != s.factor) ++i;
                int etype = i + 1; // x_{i+2} crosses e_{i+2}; 0-based edge index i+1
                std::int64_t k = s.exp;
                while (k > 0) {
                    if (side == 2) flush_cross(0, -1);
                    flush_cross(etype, +1);
                    flush_cross(0, -1);
                    --k;
                }
                while (k < 0) {
                    if (side == 2) flush_cross(etype, -1); // leftover state; normalize below
                    else {
                        flush_cross(0, +1);
                        flush_cross(etype, -1);
                    }
                    ++k;
                }
            }
        }
        if (side == 2) flush_cross(0, -1);
        p.tail = pending;
        reduce_apath(p);
        return p;
    }

    // Remove back-tracks e(+),0,e(-) and e(-),0,e(+) with trivial pending.
    void reduce_apath(APath& p) const {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i + 1 < p.crossings.size(); ++i) {
                const auto& a = p.crossings[i];
                const auto& b = p.crossings[i + 1];
                std::int64_t mid = b.pre;
                std::int64_t mid_order = a.dir > 0 ? m2 : m1;
                if (a.etype == b.etype && a.dir == -b.dir && Word::norm_exp(mid, mid_order) == 0) {
                    std::int64_t carry = a.pre;
                    if (i + 2 < p.crossings.size()) p.crossings[i + 2].pre += carry;
                    else p.tail += carry;
                    p.crossings.erase(p.crossings.begin() + i, p.crossings.begin() + i + 2);
                    changed = true;
                    break;
                }
            }
        }
    }

    // Inverse identification: A-path from v1 back to a basis word.
    Word apath_to_word(const APath& p) const {
        Word out;
        auto push_s = [&](int side, std::int64_t e) {
            std::int64_t m = side == 1 ? m1 : m2;
            e = Word::norm_exp(e, m);
            if (e == 0) return;
            out.push_syl(side == 1 ? f_s1 : f_s2, e, basis);
        };
        int side = 1;
        for (const auto& c : p.crossings) {
            push_s(side, c.pre);
            if (c.dir > 0) {
                if (c.etype > 0) out.push_syl(f_x[c.etype - 1], 1, basis);
                side = 2;
            } else {
                if (c.etype > 0) out.push_syl(f_x[c.etype - 1], -1, basis);
                side = 1;
            }
        }
        push_s(side, p.tail);
        return out;
    }

    // c_i as an A-path (one period), used to lay out candy cycles.
    APath boundary_apath(int i /*1-based*/, std::int64_t z) const {
        APath p;
        for (std::int64_t rep = 0; rep < z; ++rep) {
            std::int64_t eps1 = i == 1 ? 1 : 0;
            p.crossings.push_back({eps1, i - 1, +1});
            std::int64_t eps2 = i == 1 ? 1 : 0;
            p.crossings.push_back({eps2, i % q, -1});
        }
        p.tail = 0;
        return p;
    }
};

} // namespace orbfold
