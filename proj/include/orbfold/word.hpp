#pragma once

#include <cassert>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbfold {

enum class FactorRole { FreeLetter, Boundary, Torsion };

// One free product basis G = C_1 * ... * C_n of cyclic groups. order == 0
// means infinite cyclic.
struct FreeProductBasis {
    struct Factor {
        std::string name;
        int order = 0; // 0 = infinite
        FactorRole role = FactorRole::FreeLetter;
    };
    std::vector<Factor> factors;

    int size() const { return (int)factors.size(); }
    int order_of(int f) const { return factors.at(f).order; }
    bool is_torsion(int f) const { return factors.at(f).order >= 2; }

    int add(const std::string& name, int order, FactorRole role) {
        factors.push_back({name, order, role});
        return (int)factors.size() - 1;
    }

    std::optional<int> find(const std::string& name) const {
        for (int i = 0; i < size(); ++i)
            if (factors[i].name == name) return i;
        return std::nullopt;
    }

    int rank() const { return size(); }

    bool operator==(const FreeProductBasis& o) const {
        if (factors.size() != o.factors.size()) return false;
        for (size_t i = 0; i < factors.size(); ++i)
            if (factors[i].name != o.factors[i].name || factors[i].order != o.factors[i].order) return false;
        return true;
    }
};

// Normal-form element of a free product of cyclics: alternating syllables,
// no zero exponents, torsion exponents reduced into (0, m).
struct Word {
    struct Syl {
        int factor;
        std::int64_t exp;
        bool operator==(const Syl& o) const { return factor == o.factor && exp == o.exp; }
    };
    std::vector<Syl> syls;

    Word() = default;

    static Word identity() { return Word(); }

    static Word letter(int factor, std::int64_t exp, const FreeProductBasis& basis) {
        Word w;
        w.push_syl(factor, exp, basis);
        return w;
    }

    bool is_identity() const { return syls.empty(); }
    int length() const { return (int)syls.size(); }

    static std::int64_t norm_exp(std::int64_t e, int order) {
        if (order == 0) return e;
        e %= order;
        if (e < 0) e += order;
        return e;
    }

    // Append one syllable, merging with the tail when same factor.
    void push_syl(int factor, std::int64_t exp, const FreeProductBasis& basis) {
        exp = norm_exp(exp, basis.order_of(factor));
        if (exp == 0) return;
        if (!syls.empty() && syls.back().factor == factor) {
            std::int64_t merged = norm_exp(syls.back().exp + exp, basis.order_of(factor));
            syls.pop_back();
            if (merged != 0) syls.push_back({factor, merged});
        } else {
            syls.push_back({factor, exp});
        }
    }

    friend Word multiply(const Word& a, const Word& b, const FreeProductBasis& basis) {
        Word r = a;
        for (const auto& s : b.syls) r.push_syl(s.factor, s.exp, basis);
        return r;
    }

    Word inverse(const FreeProductBasis& basis) const {
        Word r;
        for (auto it = syls.rbegin(); it != syls.rend(); ++it) r.push_syl(it->factor, -it->exp, basis);
        return r;
    }

    Word pow(std::int64_t k, const FreeProductBasis& basis) const {
        Word base = k < 0 ? inverse(basis) : *this;
        std::int64_t n = k < 0 ? -k : k;
        Word r;
        for (std::int64_t i = 0; i < n; ++i) r = multiply(r, base, basis);
        return r;
    }

    Word conjugate(const Word& by, const FreeProductBasis& basis) const {
        return multiply(multiply(by, *this, basis), by.inverse(basis), basis);
    }

    bool operator==(const Word& o) const { return syls == o.syls; }
    bool operator!=(const Word& o) const { return !(syls == o.syls); }

    // Deterministic total order: syllable count first, then factor/exponent.
    static int cmp(const Word& a, const Word& b) {
        if (a.syls.size() != b.syls.size()) return a.syls.size() < b.syls.size() ? -1 : 1;
        for (size_t i = 0; i < a.syls.size(); ++i) {
            if (a.syls[i].factor != b.syls[i].factor) return a.syls[i].factor < b.syls[i].factor ? -1 : 1;
            if (a.syls[i].exp != b.syls[i].exp) return a.syls[i].exp < b.syls[i].exp ? -1 : 1;
        }
        return 0;
    }
    bool operator<(const Word& o) const { return cmp(*this, o) < 0; }

    // Finite order iff identity or a single torsion syllable up to conjugacy.
    bool has_finite_order(const FreeProductBasis& basis) const {
        Word c = cyclically_reduced(basis).first;
        return c.is_identity() || (c.length() == 1 && basis.is_torsion(c.syls[0].factor));
    }

    // Returns (core, conjugator u) with *this == u * core * u^-1.
    std::pair<Word, Word> cyclically_reduced(const FreeProductBasis& basis) const {
        Word core = *this;
        Word u;
        while (core.length() >= 2 && core.syls.front().factor == core.syls.back().factor) {
            Word head = Word::letter(core.syls.front().factor, core.syls.front().exp, basis);
            Word rest;
            rest.syls.assign(core.syls.begin() + 1, core.syls.end());
            core = multiply(rest, head, basis);
            u = multiply(u, head, basis);
        }
        return {core, u};
    }

    std::string str(const FreeProductBasis& basis) const {
        if (syls.empty()) return "1";
        std::ostringstream os;
        for (size_t i = 0; i < syls.size(); ++i) {
            if (i) os << " ";
            os << basis.factors[syls[i].factor].name;
            if (syls[i].exp != 1) os << "^" << syls[i].exp;
        }
        return os.str();
    }
};

// Conjugacy in a free product: cyclically reduced cores match up to rotation.
inline bool conjugate_in(const Word& a, const Word& b, const FreeProductBasis& basis) {
    Word ca = a.cyclically_reduced(basis).first;
    Word cb = b.cyclically_reduced(basis).first;
    if (ca.length() != cb.length()) return false;
    if (ca.length() <= 1) return ca == cb; // cyclic factors are abelian
    int n = ca.length();
    for (int r = 0; r < n; ++r) {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            ok = ca.syls[(i + r) % n] == cb.syls[i];
        if (ok) return true;
    }
    return false;
}

// Word grammar: whitespace-separated `name^exp` tokens, `1` for identity.
inline Word parse_word(const std::string& text, const FreeProductBasis& basis) {
    Word w;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
        if (i >= text.size()) break;
        size_t start = i;
        while (i < text.size() && !std::isspace((unsigned char)text[i]) && text[i] != '^') ++i;
        std::string name = text.substr(start, i - start);
        if (name == "1") continue;
        std::int64_t exp = 1;
        if (i < text.size() && text[i] == '^') {
            ++i;
            size_t es = i;
            if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
            while (i < text.size() && std::isdigit((unsigned char)text[i])) ++i;
            if (i == es) throw std::invalid_argument("word parse error at byte " + std::to_string(es) + ": expected exponent");
            exp = std::stoll(text.substr(es, i - es));
        }
        auto f = basis.find(name);
        if (!f) throw std::invalid_argument("word parse error at byte " + std::to_string(start) + ": unknown generator '" + name + "'");
        w.push_syl(*f, exp, basis);
    }
    return w;
}

inline std::vector<Word> parse_tuple(const std::string& text, const FreeProductBasis& basis) {
    std::vector<Word> out;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string part = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        bool blank = true;
        for (char c : part)
            if (!std::isspace((unsigned char)c)) blank = false;
        if (!blank) out.push_back(parse_word(part, basis));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

} // namespace orbfold
