#pragma once

// Built-in examples, addressable by name from the command line.

#include <string>
#include <vector>

#include "svf/geometry.hpp"

namespace svf {

struct CorpusEntry {
    std::string name;
    std::string description;
    VarietySpec spec;
};

namespace corpus_detail {

inline VarietySpec basic(VarietyKind k, long p, long n = 1, unsigned a = 1) {
    VarietySpec s;
    s.kind = k;
    s.p = p;
    s.a = a;
    s.n = n;
    return s;
}

inline VarietySpec curve(long p, std::vector<long> c, unsigned a = 1) {
    VarietySpec s = basic(VarietyKind::elliptic, p, 1, a);
    s.coeffs = std::move(c);
    return s;
}

} // namespace corpus_detail

inline const std::vector<CorpusEntry>& corpus() {
    using namespace corpus_detail;
    static const std::vector<CorpusEntry> entries = [] {
        std::vector<CorpusEntry> e;
        e.push_back({"P1", "projective line over F_5", basic(VarietyKind::projective, 5)});
        e.push_back({"P2-F3", "projective plane over F_3", basic(VarietyKind::projective, 3, 2)});
        e.push_back({"A1", "affine line over F_2", basic(VarietyKind::affine, 2)});
        e.push_back({"Gm", "multiplicative group over F_5", basic(VarietyKind::torus, 5)});
        e.push_back({"elliptic-F5-a5=-3", "y^2 = x^3 + x + 1 over F_5, 9 points", curve(5, {0, 0, 0, 1, 1})});
        e.push_back({"elliptic-F4-supersingular", "y^2 + y = x^3 over F_4", curve(2, {0, 0, 1, 0, 0}, 2)});
        {
            VarietySpec s = basic(VarietyKind::product, 5);
            s.parts = {basic(VarietyKind::projective, 5), curve(5, {0, 0, 0, 1, 1})};
            e.push_back({"P1xE-F5", "P^1 times the curve elliptic-F5-a5=-3", s});
        }
        {
            VarietySpec base = curve(3, {0, 0, 0, 2, 0});
            VarietySpec s = base;
            s.kind = VarietyKind::complement;
            s.parts = {base};
            s.removed_points = 3;
            e.push_back({"elliptic-F3-minus-3", "y^2 = x^3 - x over F_3 with three of its four rational points removed", s});
        }
        {
            VarietySpec s = basic(VarietyKind::projective, 3);
            s.twist = IntMatrix{{0, -3}, {1, 2}};
            e.push_back({"P1-F3-twisted", "P^1 over F_3 with a rank-two constant coefficient", s});
        }
        return e;
    }();
    return entries;
}

inline const CorpusEntry* find_corpus(const std::string& name) {
    for (const auto& e : corpus())
        if (e.name == name) return &e;
    return nullptr;
}

} // namespace svf
