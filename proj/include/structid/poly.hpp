#ifndef STRUCTID_POLY_HPP
#define STRUCTID_POLY_HPP

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "structid/diffvar.hpp"
#include "structid/numeric.hpp"

namespace structid {

// Sparse power product. Entries are sorted by DiffVar and carry exponents > 0.
class Monomial {
  public:
    using Entry = std::pair<DiffVar, int>;

    Monomial() = default;

    static Monomial variable(DiffVar v, int exp = 1) {
        Monomial m;
        if (exp > 0) m.entries_.emplace_back(v, exp);
        return m;
    }

    bool is_one() const { return entries_.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& [v, e] : entries_) d += e;
        return d;
    }

    int exponent_of(DiffVar v) const {
        for (const auto& [w, e] : entries_)
            if (w == v) return e;
        return 0;
    }

    Monomial times(const Monomial& other) const {
        Monomial r;
        r.entries_.reserve(entries_.size() + other.entries_.size());
        auto a = entries_.begin(), b = other.entries_.begin();
        while (a != entries_.end() && b != other.entries_.end()) {
            if (a->first < b->first)
                r.entries_.push_back(*a++);
            else if (b->first < a->first)
                r.entries_.push_back(*b++);
            else {
                r.entries_.emplace_back(a->first, a->second + b->second);
                ++a;
                ++b;
            }
        }
        r.entries_.insert(r.entries_.end(), a, entries_.end());
        r.entries_.insert(r.entries_.end(), b, other.entries_.end());
        return r;
    }

    // The power product with this variable's exponent lowered by one.
    Monomial without_one(DiffVar v) const {
        Monomial r;
        r.entries_.reserve(entries_.size());
        for (const auto& [w, e] : entries_) {
            if (w == v) {
                if (e > 1) r.entries_.emplace_back(w, e - 1);
            } else {
                r.entries_.emplace_back(w, e);
            }
        }
        return r;
    }

    const std::vector<Entry>& entries() const { return entries_; }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.entries_ == b.entries_; }

    // Canonical total order: graded, ties broken lexicographically over the
    // entry list (which compares DiffVars by the fixed total order).
    bool graded_less(const Monomial& other) const {
        int da = degree(), db = other.degree();
        if (da != db) return da < db;
        return std::lexicographical_compare(entries_.begin(), entries_.end(), other.entries_.begin(),
                                            other.entries_.end());
    }

  private:
    std::vector<Entry> entries_;
};

struct MonomialCmp {
    bool operator()(const Monomial& a, const Monomial& b) const { return a.graded_less(b); }
};

// Multivariate polynomial with exact integer coefficients in canonical form:
// no zero coefficients, no duplicate monomials. Equality is map equality.
class Poly {
  public:
    using Terms = std::map<Monomial, Int, MonomialCmp>;

    Poly() = default;

    static Poly constant(Int c) {
        Poly p;
        if (c != 0) p.terms_.emplace(Monomial(), std::move(c));
        return p;
    }

    static Poly variable(DiffVar v, int exp = 1) {
        Poly p;
        p.terms_.emplace(Monomial::variable(v, exp), Int(1));
        return p;
    }

    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }

    Int constant_value() const {
        if (terms_.empty()) return Int(0);
        return terms_.begin()->second;
    }

    int total_degree() const {
        if (terms_.empty()) return -1;
        return terms_.rbegin()->first.degree();
    }

    const Terms& terms() const { return terms_; }

    void add_term(const Monomial& m, const Int& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    Poly& operator+=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    Poly& operator-=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma.times(mb), ca * cb);
        return r;
    }

    friend Poly operator*(const Poly& a, const Int& c) {
        if (c == 0) return Poly();
        Poly r = a;
        for (auto& [m, coeff] : r.terms_) coeff *= c;
        return r;
    }

    friend Poly operator*(const Int& c, const Poly& a) { return a * c; }

    Poly pow(unsigned e) const {
        Poly r = Poly::constant(1);
        Poly base = *this;
        while (e > 0) {
            if (e & 1u) r = r * base;
            base = base * base;
            e >>= 1u;
        }
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.terms_.size() == b.terms_.size() &&
               std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin());
    }

    // gcd of the absolute coefficient values; 0 for the zero polynomial.
    Int content() const {
        Int g = 0;
        for (const auto& [m, c] : terms_) {
            g = gcd(g, c);
            if (g == 1) break;
        }
        return g;
    }

    void divide_exact(const Int& d) {
        for (auto& [m, c] : terms_) {
            Int q;
            mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
            c = q;
        }
    }

    // Largest monomial / coefficient under the canonical order.
    const Monomial& leading_monomial() const { return terms_.rbegin()->first; }
    const Int& leading_coefficient() const { return terms_.rbegin()->second; }

    std::set<DiffVar> variables() const {
        std::set<DiffVar> vs;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m.entries()) vs.insert(v);
        return vs;
    }

    bool contains_kind(VarKind k) const {
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m.entries())
                if (v.kind == k) return true;
        return false;
    }

  private:
    Terms terms_;
};

// Exact assignment of values to derivative-indexed variables.
using PointAssignment = std::map<DiffVar, Rat>;

// numerator/denominator pair of Polys. Normal form: common integer content
// removed, denominator's leading coefficient positive, zero numerator paired
// with denominator 1. A zero denominator is representable (so that validation
// can diagnose it) but never produced by arithmetic.
class RatFunc {
  public:
    RatFunc() : num_(), den_(Poly::constant(1)) {}

    RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static RatFunc from_poly(Poly p) { return RatFunc(std::move(p), Poly::constant(1)); }
    static RatFunc from_rational(const Rat& q) {
        return RatFunc(Poly::constant(Int(q.get_num())), Poly::constant(Int(q.get_den())));
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_poly() const { return den_ == Poly::constant(1); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        if (a.den_ == b.den_) return RatFunc(a.num_ - b.num_, a.den_);
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.num_.is_zero()) throw Error("division by zero rational function");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFunc operator-() const { return RatFunc(-num_, den_); }

    RatFunc pow(unsigned e) const { return RatFunc(num_.pow(e), den_.pow(e)); }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

  private:
    void normalize() {
        if (den_.is_zero()) return;  // left for validation to flag
        if (num_.is_zero()) {
            den_ = Poly::constant(1);
            return;
        }
        Int g = gcd(num_.content(), den_.content());
        if (g > 1) {
            num_.divide_exact(g);
            den_.divide_exact(g);
        }
        if (den_.leading_coefficient() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
    }

    Poly num_;
    Poly den_;
};

}  // namespace structid

#endif  // STRUCTID_POLY_HPP
