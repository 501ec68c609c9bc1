#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"
#include "signature.hpp"
#include "word.hpp"

namespace orbfold {

// Standard presentation of pi_1^o for an orbifold with boundary:
//   < a_1..a_h, c_1..c_q, s_1..s_r | s_i^{m_i}, R s_1...s_r = c_1...c_q >
// Generators live in an ambient free alphabet; relators are words over it.
struct StandardPresentation {
    FreeProductBasis alphabet; // all generators as free letters
    std::vector<Word> relators;
    int h = 0, q = 0, r = 0;
    bool orientable = true;

    int a_index(int i) const { return i; }             // 0-based, i < h
    int c_index(int i) const { return h + i; }         // i < q
    int s_index(int i) const { return h + q + i; }     // i < r
};

inline Word surface_relator_R(const StandardPresentation& p) {
    Word R;
    if (p.orientable) {
        for (int i = 0; i + 1 < p.h; i += 2) {
            Word a = Word::letter(p.a_index(i), 1, p.alphabet);
            Word b = Word::letter(p.a_index(i + 1), 1, p.alphabet);
            Word comm = multiply(multiply(a, b, p.alphabet),
                                 multiply(a.inverse(p.alphabet), b.inverse(p.alphabet), p.alphabet), p.alphabet);
            R = multiply(R, comm, p.alphabet);
        }
    } else {
        for (int i = 0; i < p.h; ++i)
            R = multiply(R, Word::letter(p.a_index(i), 2, p.alphabet), p.alphabet);
    }
    return R;
}

inline StandardPresentation standard_presentation(const OrbifoldSignature& sig) {
    sig.validate();
    if (sig.boundary < 1)
        throw std::invalid_argument("standard presentation requires q >= 1 (closed orbifolds are handled by the decomposition layer)");
    StandardPresentation p;
    p.orientable = sig.orientable;
    p.h = sig.free_letter_count();
    p.q = sig.boundary;
    p.r = sig.cone_count();
    for (int i = 0; i < p.h; ++i) {
        // orientable genus pairs read a1,b1,a2,b2,...; non-orientable a1..ah
        std::string name = sig.orientable
            ? std::string(i % 2 ? "b" : "a") + std::to_string(i / 2 + 1)
            : "a" + std::to_string(i + 1);
        p.alphabet.add(name, 0, FactorRole::FreeLetter);
    }
    for (int i = 0; i < p.q; ++i) p.alphabet.add("c" + std::to_string(i + 1), 0, FactorRole::Boundary);
    for (int i = 0; i < p.r; ++i) p.alphabet.add("s" + std::to_string(i + 1), 0, FactorRole::Torsion);
    for (int i = 0; i < p.r; ++i)
        p.relators.push_back(Word::letter(p.s_index(i), sig.cone_orders[i], p.alphabet));
    // R s_1...s_r (c_1...c_q)^-1
    Word lhs = surface_relator_R(p);
    for (int i = 0; i < p.r; ++i) lhs = multiply(lhs, Word::letter(p.s_index(i), 1, p.alphabet), p.alphabet);
    Word cs;
    for (int i = 0; i < p.q; ++i) cs = multiply(cs, Word::letter(p.c_index(i), 1, p.alphabet), p.alphabet);
    p.relators.push_back(multiply(lhs, cs.inverse(p.alphabet), p.alphabet));
    return p;
}

// Free product basis obtained from (*) by eliminating c_k via the long
// relation. Carries the homomorphism from presentation letters to the basis.
struct FreeProductPresentation {
    OrbifoldSignature sig;
    int eliminated_k = 0;              // 1-based boundary index removed
    FreeProductBasis basis;            // a_*, c_* (without c_k), s_*
    StandardPresentation presentation; // the ambient presentation
    std::vector<Word> letter_images;   // presentation letter -> basis word

    Word rewrite(const Word& w) const {
        Word out;
        for (const auto& s : w.syls) {
            Word img = letter_images[s.factor].pow(s.exp, basis);
            out = multiply(out, img, basis);
        }
        return out;
    }

    // Image of c_i (1-based) in the basis.
    Word boundary_word(int i) const { return rewrite(Word::letter(presentation.c_index(i - 1), 1, presentation.alphabet)); }
};

inline FreeProductPresentation free_product_basis(const OrbifoldSignature& sig, int k) {
    if (k < 1 || k > sig.boundary) throw std::invalid_argument("boundary index k out of range");
    FreeProductPresentation fp;
    fp.sig = sig;
    fp.eliminated_k = k;
    fp.presentation = standard_presentation(sig);
    const auto& p = fp.presentation;
    std::vector<int> basis_of_letter(p.alphabet.size(), -1);
    for (int i = 0; i < p.h; ++i)
        basis_of_letter[p.a_index(i)] =
            fp.basis.add(p.alphabet.factors[p.a_index(i)].name, 0, FactorRole::FreeLetter);
    for (int i = 0; i < p.q; ++i)
        if (i != k - 1)
            basis_of_letter[p.c_index(i)] = fp.basis.add("c" + std::to_string(i + 1), 0, FactorRole::Boundary);
    for (int i = 0; i < p.r; ++i)
        basis_of_letter[p.s_index(i)] = fp.basis.add("s" + std::to_string(i + 1), sig.cone_orders[i], FactorRole::Torsion);

    fp.letter_images.assign(p.alphabet.size(), Word());
    for (int l = 0; l < p.alphabet.size(); ++l)
        if (basis_of_letter[l] >= 0)
            fp.letter_images[l] = Word::letter(basis_of_letter[l], 1, fp.basis);

    // c_k = (c_1...c_{k-1})^-1 R s_1...s_r (c_{k+1}...c_q)^-1
    auto img = [&](int letter) { return fp.letter_images[letter]; };
    Word pre, post;
    for (int i = 0; i < k - 1; ++i) pre = multiply(pre, img(p.c_index(i)), fp.basis);
    for (int i = k; i < p.q; ++i) post = multiply(post, img(p.c_index(i)), fp.basis);
    Word R;
    {
        // rebuild R over the basis
        if (p.orientable) {
            for (int i = 0; i + 1 < p.h; i += 2) {
                Word a = img(p.a_index(i)), b = img(p.a_index(i + 1));
                Word comm = multiply(multiply(a, b, fp.basis),
                                     multiply(a.inverse(fp.basis), b.inverse(fp.basis), fp.basis), fp.basis);
                R = multiply(R, comm, fp.basis);
            }
        } else {
            for (int i = 0; i < p.h; ++i) R = multiply(R, img(p.a_index(i)).pow(2, fp.basis), fp.basis);
        }
    }
    Word mid = R;
    for (int i = 0; i < p.r; ++i) mid = multiply(mid, img(p.s_index(i)), fp.basis);
    fp.letter_images[p.c_index(k - 1)] =
        multiply(multiply(pre.inverse(fp.basis), mid, fp.basis), post.inverse(fp.basis), fp.basis);
    return fp;
}

struct EulerReport {
    Rational chi;
    Rational rank_lower;  // 1 - chi
    Rational rank_upper;  // 2 - 2 chi
    int rank = 0;
    bool lower_tight = false; // all factors infinite
    bool upper_tight = false; // all factors of order 2
};

inline EulerReport euler_characteristic(const FreeProductBasis& basis) {
    EulerReport rep;
    int n = basis.size();
    Rational chi(1 - n);
    bool all_inf = true, all_two = true; // vacuously true on the trivial group
    for (const auto& f : basis.factors) {
        if (f.order > 0) { chi = chi + Rational(1, f.order); all_inf = false; }
        if (f.order != 2) all_two = false;
    }
    rep.chi = chi;
    rep.rank = n;
    rep.rank_lower = Rational(1) - chi;
    rep.rank_upper = Rational(2) - Rational(2) * chi;
    rep.lower_tight = all_inf;
    rep.upper_tight = all_two;
    return rep;
}

// g of finite order is conjugate to s_i^k; angle-minimal iff
// |k| equals the index |<s_i> : <s_i^k>| = m_i / gcd(m_i, k).
inline bool is_angle_minimal(const Word& g, const FreeProductBasis& basis) {
    auto [core, u] = g.cyclically_reduced(basis);
    if (core.is_identity()) throw std::domain_error("angle-minimality is undefined for the trivial element");
    if (core.length() != 1 || !basis.is_torsion(core.syls[0].factor))
        throw std::domain_error("angle-minimality is undefined for elements of infinite order");
    std::int64_t m = basis.order_of(core.syls[0].factor);
    std::int64_t k = core.syls[0].exp; // in (0, m)
    std::int64_t index = m / std::gcd(m, k);
    return k == index || k == m - index;
}

// Same test for a bare exponent in Z_m.
inline bool angle_minimal_exp(std::int64_t k, std::int64_t m) {
    k = ((k % m) + m) % m;
    if (k == 0) return false;
    std::int64_t index = m / std::gcd(m, k);
    return k == index || k == m - index;
}

} // namespace orbfold
