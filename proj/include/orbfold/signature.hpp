#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace orbfold {

// Compact 2-orbifold signature F(m_1,...,m_r): underlying surface given by
// orientability + genus, with `boundary` boundary circles and cone points of
// the listed orders.
struct OrbifoldSignature {
    bool orientable = true;
    int genus = 0;          // surface genus (h = 2*genus when orientable, h = genus otherwise)
    int boundary = 0;       // q
    std::vector<int> cone_orders;

    int cone_count() const { return (int)cone_orders.size(); }
    bool closed() const { return boundary == 0; }
    int free_letter_count() const { return orientable ? 2 * genus : genus; }

    void validate() const {
        if (genus < 0 || boundary < 0) throw std::invalid_argument("negative genus or boundary count");
        if (!orientable && genus == 0) throw std::invalid_argument("non-orientable surface needs genus >= 1");
        for (int m : cone_orders)
            if (m < 2) throw std::invalid_argument("cone order must be >= 2");
    }

    // chi^o = chi(surface) - sum (1 - 1/m_i)
    Rational orbifold_euler() const {
        int chi_surface = (orientable ? 2 - 2 * genus : 2 - genus) - boundary;
        Rational chi(chi_surface);
        for (int m : cone_orders) chi = chi - Rational(m - 1, m);
        return chi;
    }

    // The four small orbifolds: Moebius band, D^2(m1,m2), A(m), pair of pants.
    bool is_small() const {
        if (!orientable) return genus == 1 && boundary == 1 && cone_orders.empty();
        if (genus != 0) return false;
        if (boundary == 1 && cone_orders.size() == 2) return true;
        if (boundary == 2 && cone_orders.size() == 1) return true;
        if (boundary == 3 && cone_orders.empty()) return true;
        return false;
    }

    bool is_triangle() const { return closed() && orientable && genus == 0 && cone_orders.size() == 3; }

    // Closed orbifolds that admit a decomposition into small pieces and are not
    // triangle groups. Spherical/bad (g=0, r<=2) and the bare torus/Klein
    // bottle are excluded alongside triangle groups.
    bool is_sufficiently_large() const {
        if (!closed()) return false;
        int r = cone_count();
        if (orientable) {
            if (genus == 0) return r >= 4;
            if (genus == 1) return r >= 1;
            return true;
        }
        if (genus == 1) return r >= 2;
        if (genus == 2) return r >= 1;
        return true;
    }

    std::string str() const {
        std::ostringstream os;
        os << "F(" << (orientable ? "or" : "non") << ",g=" << genus << ",b=" << boundary;
        if (!cone_orders.empty()) {
            os << ";";
            for (size_t i = 0; i < cone_orders.size(); ++i) {
                if (i) os << ",";
                os << cone_orders[i];
            }
        }
        os << ")";
        return os.str();
    }
};

// Grammar: F(or|non, g=<int>, b=<int>; m1,...,mr)  -- cone list optional.
inline OrbifoldSignature parse_signature(const std::string& text) {
    auto fail = [&](size_t at, const std::string& why) {
        throw std::invalid_argument("signature parse error at byte " + std::to_string(at) + ": " + why);
    };
    size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace((unsigned char)text[i])) ++i; };
    auto expect = [&](const std::string& tok) {
        skip_ws();
        if (text.compare(i, tok.size(), tok) != 0) fail(i, "expected '" + tok + "'");
        i += tok.size();
    };
    auto read_int = [&]() -> int {
        skip_ws();
        size_t start = i;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
        while (i < text.size() && std::isdigit((unsigned char)text[i])) ++i;
        if (i == start) fail(start, "expected integer");
        return std::stoi(text.substr(start, i - start));
    };

    OrbifoldSignature sig;
    expect("F");
    expect("(");
    skip_ws();
    if (text.compare(i, 2, "or") == 0) { sig.orientable = true; i += 2; }
    else if (text.compare(i, 3, "non") == 0) { sig.orientable = false; i += 3; }
    else fail(i, "expected 'or' or 'non'");
    expect(",");
    expect("g");
    expect("=");
    sig.genus = read_int();
    expect(",");
    expect("b");
    expect("=");
    sig.boundary = read_int();
    skip_ws();
    if (i < text.size() && text[i] == ';') {
        ++i;
        skip_ws();
        while (i < text.size() && text[i] != ')') {
            sig.cone_orders.push_back(read_int());
            skip_ws();
            if (i < text.size() && text[i] == ',') { ++i; skip_ws(); }
        }
    }
    expect(")");
    sig.validate();
    return sig;
}

} // namespace orbfold
