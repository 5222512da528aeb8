#ifndef STRUCTID_DIFFPOLY_HPP
#define STRUCTID_DIFFPOLY_HPP

#include <vector>

#include "structid/poly.hpp"

namespace structid {

class MissingAssignment : public Error {
  public:
    explicit MissingAssignment(DiffVar v)
        : Error("evaluation point does not assign a required variable"), var(v) {}
    DiffVar var;
};

// Formal derivative in the differential ring C[mu]{x, y, u}: variables of
// kind State/Output/Input step to the next order, parameters and constants
// are annihilated; extended by the Leibniz rule and additivity.
inline Poly differentiate(const Poly& p) {
    Poly r;
    for (const auto& [mono, coeff] : p.terms()) {
        for (const auto& [v, e] : mono.entries()) {
            if (v.kind == VarKind::Param || v.kind == VarKind::Aux) continue;
            Monomial rest = mono.without_one(v).times(Monomial::variable(v.shifted(1)));
            r.add_term(rest, coeff * e);
        }
    }
    return r;
}

inline Poly iterated_derivative(Poly p, int k) {
    for (int i = 0; i < k; ++i) p = differentiate(p);
    return p;
}

// Largest derivative order of the (kind, index) symbol occurring in p,
// -1 when the symbol is absent.
inline int order_in(const Poly& p, VarKind kind, int index) {
    int best = -1;
    for (const auto& [mono, coeff] : p.terms())
        for (const auto& [v, e] : mono.entries())
            if (v.kind == kind && v.index == index && v.order > best) best = v.order;
    return best;
}

// Formal partial derivative with respect to the single indeterminate v.
inline Poly partial(const Poly& p, DiffVar v) {
    Poly r;
    for (const auto& [mono, coeff] : p.terms()) {
        int e = mono.exponent_of(v);
        if (e == 0) continue;
        r.add_term(mono.without_one(v), coeff * e);
    }
    return r;
}

inline Rat evaluate_monomial(const Monomial& m, const PointAssignment& point) {
    Rat acc(1);
    for (const auto& [v, e] : m.entries()) {
        auto it = point.find(v);
        if (it == point.end()) throw MissingAssignment(v);
        acc *= pow_rat(it->second, static_cast<unsigned long>(e));
    }
    return acc;
}

inline Rat evaluate(const Poly& p, const PointAssignment& point) {
    Rat acc(0);
    for (const auto& [mono, coeff] : p.terms()) acc += Rat(coeff) * evaluate_monomial(mono, point);
    return acc;
}

// Result of a partial substitution: poly == scale * p[bindings], with scale a
// positive rational recorded so that zero sets and evaluation commute exactly.
struct Substitution {
    Poly poly;
    Rat scale{1};
};

inline Substitution substitute(const Poly& p, const PointAssignment& bindings) {
    if (bindings.empty()) return {p, Rat(1)};
    std::map<Monomial, Rat, MonomialCmp> acc;
    for (const auto& [mono, coeff] : p.terms()) {
        Rat factor(1);
        Monomial free;
        for (const auto& [v, e] : mono.entries()) {
            auto it = bindings.find(v);
            if (it == bindings.end())
                free = free.times(Monomial::variable(v, e));
            else
                factor *= pow_rat(it->second, static_cast<unsigned long>(e));
        }
        if (factor == 0) continue;
        Rat& slot = acc[free];
        slot += Rat(coeff) * factor;
        if (slot == 0) acc.erase(free);
    }
    if (acc.empty()) return {Poly(), Rat(1)};
    Int den_lcm(1), num_gcd(0);
    for (const auto& [m, q] : acc) den_lcm = lcm(den_lcm, Int(q.get_den()));
    std::vector<std::pair<Monomial, Int>> ints;
    ints.reserve(acc.size());
    for (const auto& [m, q] : acc) {
        Int c = Int(q.get_num()) * (den_lcm / Int(q.get_den()));
        num_gcd = gcd(num_gcd, c);
        ints.emplace_back(m, std::move(c));
    }
    Poly out;
    for (auto& [m, c] : ints) {
        Int q;
        mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), num_gcd.get_mpz_t());
        out.add_term(m, q);
    }
    return {out, Rat(den_lcm) / Rat(num_gcd)};
}

}  // namespace structid

#endif  // STRUCTID_DIFFPOLY_HPP
