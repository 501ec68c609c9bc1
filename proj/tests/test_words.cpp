#include <catch2/catch_amalgamated.hpp>

#include <orbfold/presentation.hpp>
#include <orbfold/signature.hpp>
#include <orbfold/word.hpp>

#include <random>

using namespace orbfold;

static FreeProductBasis make_basis(std::vector<int> orders) {
    FreeProductBasis b;
    int fi = 1, si = 1;
    for (int m : orders) {
        if (m == 0) b.add("x" + std::to_string(fi++), 0, FactorRole::FreeLetter);
        else b.add("s" + std::to_string(si++), m, FactorRole::Torsion);
    }
    return b;
}

TEST_CASE("multiplication in free products of cyclics") {
    FreeProductBasis z2z2 = make_basis({2, 2});
    Word s1 = Word::letter(0, 1, z2z2);
    REQUIRE(multiply(s1, s1, z2z2).is_identity());

    FreeProductBasis z15 = make_basis({15});
    Word a = Word::letter(0, 8, z15), b = Word::letter(0, 9, z15);
    Word ab = multiply(a, b, z15);
    REQUIRE(ab == Word::letter(0, 2, z15));

    FreeProductBasis f2 = make_basis({0, 0});
    Word w = multiply(Word::letter(0, 1, f2), Word::letter(1, 1, f2), f2); // a b
    REQUIRE(multiply(w, w.inverse(f2), f2).is_identity());
}

TEST_CASE("multiplication is associative and respects torsion on random triples") {
    std::mt19937_64 rng(7);
    FreeProductBasis basis = make_basis({3, 0, 4});
    auto random_word = [&](int len) {
        Word w;
        std::uniform_int_distribution<int> pf(0, basis.size() - 1);
        std::uniform_int_distribution<int> pe(-3, 3);
        for (int i = 0; i < len; ++i) {
            int e = pe(rng);
            if (e) w.push_syl(pf(rng), e, basis);
        }
        return w;
    };
    for (int i = 0; i < 10000; ++i) {
        Word a = random_word(4), b = random_word(4), c = random_word(4);
        REQUIRE(multiply(multiply(a, b, basis), c, basis) == multiply(a, multiply(b, c, basis), basis));
    }
    // torsion relation s^m = 1
    Word s = Word::letter(0, 1, basis);
    REQUIRE(s.pow(3, basis).is_identity());
}

TEST_CASE("word normal form invariants") {
    FreeProductBasis basis = make_basis({5, 0});
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pf(0, 1), pe(-6, 6);
    for (int i = 0; i < 2000; ++i) {
        Word w;
        for (int j = 0; j < 6; ++j) {
            int e = pe(rng);
            if (e) w.push_syl(pf(rng), e, basis);
        }
        for (size_t k = 0; k < w.syls.size(); ++k) {
            REQUIRE(w.syls[k].exp != 0);
            if (basis.is_torsion(w.syls[k].factor)) {
                REQUIRE(w.syls[k].exp > 0);
                REQUIRE(w.syls[k].exp < 5);
            }
            if (k) REQUIRE(w.syls[k].factor != w.syls[k - 1].factor);
        }
        REQUIRE(multiply(w, w.inverse(basis), basis).is_identity());
    }
}

TEST_CASE("signature parsing and predicates") {
    auto sig = parse_signature("F(or,g=2,b=1;15,14,7)");
    REQUIRE(sig.orientable);
    REQUIRE(sig.genus == 2);
    REQUIRE(sig.boundary == 1);
    REQUIRE(sig.cone_orders == std::vector<int>{15, 14, 7});
    REQUIRE(parse_signature(sig.str()).str() == sig.str());

    REQUIRE(parse_signature("F(or,g=0,b=1;2,2)").is_small());   // D^2(2,2)
    REQUIRE(parse_signature("F(or,g=0,b=2;3)").is_small());     // A(3)
    REQUIRE(parse_signature("F(or,g=0,b=3)").is_small());       // pants
    REQUIRE(parse_signature("F(non,g=1,b=1)").is_small());      // Moebius
    REQUIRE_FALSE(parse_signature("F(or,g=0,b=1;2,2,2)").is_small());

    REQUIRE(parse_signature("F(or,g=1,b=0;15,14)").is_sufficiently_large());
    REQUIRE(parse_signature("F(or,g=2,b=0)").is_sufficiently_large());
    REQUIRE_FALSE(parse_signature("F(or,g=0,b=0;2,3,7)").is_sufficiently_large()); // triangle
    REQUIRE_FALSE(parse_signature("F(or,g=1,b=0)").is_sufficiently_large());       // bare torus
    REQUIRE_FALSE(parse_signature("F(or,g=0,b=0;5,5)").is_sufficiently_large());   // spherical
}

TEST_CASE("standard presentation of small orbifolds") {
    // D^2(2,2) -> <s1,s2,c1 | s1^2, s2^2, c1^-1 s1 s2>
    auto sig = parse_signature("F(or,g=0,b=1;2,2)");
    auto p = standard_presentation(sig);
    REQUIRE(p.alphabet.size() == 3); // c1, s1, s2
    REQUIRE(p.relators.size() == 3);
    // long relator: s1 s2 c1^-1
    Word lr = p.relators.back();
    REQUIRE(lr.length() == 3);

    REQUIRE_THROWS(standard_presentation(parse_signature("F(or,g=1,b=0;3)")));
}

TEST_CASE("free product basis eliminates one boundary word") {
    // D^2(2,2), k=1: basis (s1,s2), c1 -> s1 s2
    auto fp = free_product_basis(parse_signature("F(or,g=0,b=1;2,2)"), 1);
    REQUIRE(fp.basis.size() == 2);
    Word c1 = fp.boundary_word(1);
    Word expect = multiply(Word::letter(0, 1, fp.basis), Word::letter(1, 1, fp.basis), fp.basis);
    REQUIRE(c1 == expect);

    // A(2), k=2: basis (c1, s1), c2 -> c1^-1 s1
    auto fpa = free_product_basis(parse_signature("F(or,g=0,b=2;2)"), 2);
    REQUIRE(fpa.basis.size() == 2);
    auto c1i = fpa.basis.find("c1");
    auto s1i = fpa.basis.find("s1");
    REQUIRE(c1i);
    REQUIRE(s1i);
    Word c2 = fpa.boundary_word(2);
    Word want = multiply(Word::letter(*c1i, -1, fpa.basis), Word::letter(*s1i, 1, fpa.basis), fpa.basis);
    REQUIRE(c2 == want);

    // pants, k=3: free basis (c1,c2), c3 = (c1 c2)^-1
    auto fpp = free_product_basis(parse_signature("F(or,g=0,b=3)"), 3);
    REQUIRE(fpp.basis.size() == 2);
    for (const auto& f : fpp.basis.factors) REQUIRE(f.order == 0);
    Word c3 = fpp.boundary_word(3);
    Word c1c2 = multiply(fpp.boundary_word(1), fpp.boundary_word(2), fpp.basis);
    REQUIRE(multiply(c1c2, c3, fpp.basis).is_identity());

    REQUIRE_THROWS(free_product_basis(parse_signature("F(or,g=0,b=1;2,2)"), 2));
}

TEST_CASE("rewriting map is a homomorphism that round-trips surviving letters") {
    auto sig = parse_signature("F(or,g=1,b=2;3,4)");
    auto fp = free_product_basis(sig, 2);
    const auto& p = fp.presentation;
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pl(0, p.alphabet.size() - 1), pe(-2, 2);
    for (int i = 0; i < 500; ++i) {
        Word u, v;
        for (int j = 0; j < 3; ++j) {
            int e = pe(rng);
            if (e) u.push_syl(pl(rng), e, p.alphabet);
            e = pe(rng);
            if (e) v.push_syl(pl(rng), e, p.alphabet);
        }
        REQUIRE(fp.rewrite(multiply(u, v, p.alphabet)) ==
                multiply(fp.rewrite(u), fp.rewrite(v), fp.basis));
    }
    // relators die
    for (const auto& r : p.relators) REQUIRE(fp.rewrite(r).is_identity());
}

TEST_CASE("euler characteristic with rank bounds") {
    auto z2z2 = make_basis({2, 2});
    auto rep = euler_characteristic(z2z2);
    REQUIRE(rep.chi == Rational(0));
    REQUIRE(rep.rank_lower == Rational(1));
    REQUIRE(rep.rank_upper == Rational(2));
    REQUIRE(rep.upper_tight);
    REQUIRE_FALSE(rep.lower_tight);

    auto f2 = make_basis({0, 0});
    rep = euler_characteristic(f2);
    REQUIRE(rep.chi == Rational(-1));
    REQUIRE(rep.rank_lower == Rational(2));
    REQUIRE(rep.rank_upper == Rational(4));
    REQUIRE(rep.lower_tight);

    auto big = make_basis({15, 14});
    rep = euler_characteristic(big);
    REQUIRE(rep.chi == Rational(-1) + Rational(1, 15) + Rational(1, 14));
}

TEST_CASE("euler equality cases exhaustively for small bases") {
    std::vector<int> orders{2, 3, 4, 0};
    for (int r = 0; r <= 4; ++r) {
        std::vector<int> pick(r, 0);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == r) {
                std::vector<int> os(pick.begin(), pick.end());
                for (auto& o : os) o = orders[o];
                auto basis = make_basis(os);
                auto rep = euler_characteristic(basis);
                bool all_inf = true, all_two = true;
                for (int o : os) {
                    if (o != 0) all_inf = false;
                    if (o != 2) all_two = false;
                }
                REQUIRE((rep.rank_lower == Rational(rep.rank)) == all_inf);
                REQUIRE((rep.rank_upper == Rational(rep.rank)) == all_two);
                return;
            }
            for (size_t i = 0; i < orders.size(); ++i) { pick[pos] = (int)i; rec(pos + 1); }
        };
        rec(0);
    }
}

TEST_CASE("angle minimality") {
    auto z4 = make_basis({4});
    REQUIRE(is_angle_minimal(Word::letter(0, 2, z4), z4));
    auto z15 = make_basis({15});
    REQUIRE_FALSE(is_angle_minimal(Word::letter(0, 2, z15), z15));
    auto mixed = make_basis({9, 0});
    Word u = Word::letter(1, 3, mixed);
    Word g = Word::letter(0, 3, mixed).conjugate(u, mixed);
    REQUIRE(is_angle_minimal(g, mixed));

    REQUIRE_THROWS(is_angle_minimal(Word(), z4));
    REQUIRE_THROWS(is_angle_minimal(Word::letter(1, 1, mixed), mixed));
}

TEST_CASE("angle minimality is conjugation and inversion invariant") {
    auto basis = make_basis({12, 0});
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> pf(0, 1), pe(-3, 3);
    for (int i = 0; i < 500; ++i) {
        std::uniform_int_distribution<int> pk(1, 11);
        Word g = Word::letter(0, pk(rng), basis);
        Word u;
        for (int j = 0; j < 3; ++j) {
            int e = pe(rng);
            if (e) u.push_syl(pf(rng), e, basis);
        }
        bool base_val = is_angle_minimal(g, basis);
        REQUIRE(is_angle_minimal(g.conjugate(u, basis), basis) == base_val);
        REQUIRE(is_angle_minimal(g.inverse(basis), basis) == base_val);
    }
}

TEST_CASE("word parsing round trip") {
    auto fp = free_product_basis(parse_signature("F(or,g=2,b=1;15,14,7)"), 1);
    Word w = parse_word("a1 b1^-1 s1^2", fp.basis);
    REQUIRE(w.length() == 3);
    REQUIRE(parse_word(w.str(fp.basis), fp.basis) == w);
    REQUIRE_THROWS(parse_word("zz^2", fp.basis));
    auto t = parse_tuple("s1^2 , s2^3 , a1", fp.basis);
    REQUIRE(t.size() == 3);
}
