#ifndef STRUCTID_GROEBNER_HPP
#define STRUCTID_GROEBNER_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <variant>
#include <vector>

#include "structid/poly.hpp"

namespace structid {

class PrimeCollision : public Error {
  public:
    explicit PrimeCollision(const std::string& msg) : Error(msg) {}
};

// Degree reverse lexicographic order over an explicit variable sequence,
// largest variable first. The sequence must cover every variable occurring in
// the processed polynomials (auxiliary Rabinowitsch variables included).
struct MonomialOrder {
    std::vector<DiffVar> vars;

    int column_of(DiffVar v) const {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == v) return static_cast<int>(i);
        return -1;
    }
};

struct CoefficientField {
    enum class Type { Prime, ExactRational };
    Type type = Type::Prime;
    std::uint64_t prime = default_prime;

    static constexpr std::uint64_t default_prime = 2147483647ULL;  // 2^31 - 1

    static CoefficientField prime_field(std::uint64_t p) { return {Type::Prime, p}; }
    static CoefficientField rationals() { return {Type::ExactRational, 0}; }
};

namespace gb_detail {

using Expt = std::uint16_t;

struct Mono {
    std::vector<Expt> e;
    int deg = 0;

    static Mono one(std::size_t nvars) { return Mono{std::vector<Expt>(nvars, 0), 0}; }
};

inline Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r = a;
    for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = static_cast<Expt>(r.e[i] + b.e[i]);
    r.deg = a.deg + b.deg;
    return r;
}

inline bool mono_divides(const Mono& a, const Mono& b) {  // a | b
    if (a.deg > b.deg) return false;
    for (std::size_t i = 0; i < a.e.size(); ++i)
        if (a.e[i] > b.e[i]) return false;
    return true;
}

inline Mono mono_div(const Mono& a, const Mono& b) {  // a / b, assumes b | a
    Mono r = a;
    for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = static_cast<Expt>(r.e[i] - b.e[i]);
    r.deg = a.deg - b.deg;
    return r;
}

inline Mono mono_lcm(const Mono& a, const Mono& b) {
    Mono r = a;
    r.deg = 0;
    for (std::size_t i = 0; i < r.e.size(); ++i) {
        r.e[i] = std::max(a.e[i], b.e[i]);
        r.deg += r.e[i];
    }
    return r;
}

inline bool mono_coprime(const Mono& a, const Mono& b) {
    for (std::size_t i = 0; i < a.e.size(); ++i)
        if (a.e[i] != 0 && b.e[i] != 0) return false;
    return true;
}

// degrevlex: higher degree wins; on ties the monomial with the smaller
// exponent in the last differing position (w.r.t. the smallest variable) wins.
inline int mono_cmp(const Mono& a, const Mono& b) {
    if (a.deg != b.deg) return a.deg < b.deg ? -1 : 1;
    for (std::size_t i = a.e.size(); i-- > 0;) {
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? -1 : 1;
    }
    return 0;
}

inline bool mono_eq(const Mono& a, const Mono& b) { return a.deg == b.deg && a.e == b.e; }

struct FpField {
    std::uint64_t p;
    using Elem = std::uint64_t;

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }
    Elem add(Elem a, Elem b) const {
        Elem s = a + b;
        return s >= p ? s - p : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p - b; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
    Elem mul(Elem a, Elem b) const { return (a * static_cast<unsigned __int128>(b)) % p; }
    Elem inv(Elem a) const {
        // extended Euclid; p prime, a != 0
        std::int64_t t = 0, newt = 1;
        std::int64_t r = static_cast<std::int64_t>(p), newr = static_cast<std::int64_t>(a);
        while (newr != 0) {
            std::int64_t q = r / newr;
            std::int64_t tmp = t - q * newt;
            t = newt;
            newt = tmp;
            tmp = r - q * newr;
            r = newr;
            newr = tmp;
        }
        if (t < 0) t += static_cast<std::int64_t>(p);
        return static_cast<Elem>(t);
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem from_int(const Int& c) const {
        unsigned long r = mpz_fdiv_ui(c.get_mpz_t(), static_cast<unsigned long>(p));
        return static_cast<Elem>(r);
    }
};

struct QQField {
    using Elem = Rat;

    Elem zero() const { return Rat(0); }
    Elem one() const { return Rat(1); }
    bool is_zero(const Elem& a) const { return a == 0; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem inv(const Elem& a) const { return Rat(1) / a; }
    Elem div(const Elem& a, const Elem& b) const { return a / b; }
    Elem from_int(const Int& c) const { return Rat(c); }
};

template <class Field>
struct PolyF {
    using Elem = typename Field::Elem;
    struct Term {
        Elem c;
        Mono m;
    };
    std::vector<Term> t;  // sorted with the largest monomial first
    int sugar = 0;

    bool empty() const { return t.empty(); }
    const Mono& lm() const { return t.front().m; }
    const Elem& lc() const { return t.front().c; }
};

// r = a - c * u * b, all term lists ordered descending.
template <class Field>
PolyF<Field> sub_scaled(const Field& k, const PolyF<Field>& a, const PolyF<Field>& b,
                        const typename Field::Elem& c, const Mono& u) {
    PolyF<Field> r;
    r.t.reserve(a.t.size() + b.t.size());
    std::size_t i = 0, j = 0;
    while (i < a.t.size() && j < b.t.size()) {
        Mono bm = mono_mul(b.t[j].m, u);
        int cmp = mono_cmp(a.t[i].m, bm);
        if (cmp > 0) {
            r.t.push_back(a.t[i++]);
        } else if (cmp < 0) {
            r.t.push_back({k.neg(k.mul(c, b.t[j].c)), std::move(bm)});
            ++j;
        } else {
            auto nc = k.sub(a.t[i].c, k.mul(c, b.t[j].c));
            if (!k.is_zero(nc)) r.t.push_back({nc, a.t[i].m});
            ++i;
            ++j;
        }
    }
    for (; i < a.t.size(); ++i) r.t.push_back(a.t[i]);
    for (; j < b.t.size(); ++j) r.t.push_back({k.neg(k.mul(c, b.t[j].c)), mono_mul(b.t[j].m, u)});
    r.sugar = std::max(a.sugar, b.sugar + u.deg);
    return r;
}

template <class Field>
void make_monic(const Field& k, PolyF<Field>& f) {
    if (f.empty()) return;
    auto s = k.inv(f.lc());
    for (auto& term : f.t) term.c = k.mul(term.c, s);
}

// Full normal form: head reduction plus tail reduction against `basis`,
// skipping index `skip` when nonnegative.
template <class Field>
PolyF<Field> normal_form_impl(const Field& k, PolyF<Field> work, const std::vector<PolyF<Field>>& basis,
                              int skip = -1) {
    PolyF<Field> rem;
    rem.sugar = work.sugar;
    while (!work.empty()) {
        bool reduced = false;
        for (std::size_t g = 0; g < basis.size(); ++g) {
            if (static_cast<int>(g) == skip || basis[g].empty()) continue;
            if (mono_divides(basis[g].lm(), work.lm())) {
                Mono u = mono_div(work.lm(), basis[g].lm());
                auto c = k.div(work.lc(), basis[g].lc());
                work = sub_scaled(k, work, basis[g], c, u);
                reduced = true;
                break;
            }
        }
        if (!reduced) {
            rem.t.push_back(work.t.front());
            work.t.erase(work.t.begin());
        }
    }
    rem.sugar = std::max(rem.sugar, rem.empty() ? 0 : rem.lm().deg);
    return rem;
}

struct Pair {
    int i, j;
    Mono lcm;
    int sugar;
};

template <class Field>
class Engine {
  public:
    Engine(Field k, std::size_t nvars) : k_(std::move(k)), nvars_(nvars) {}

    const Field& field() const { return k_; }
    const std::vector<PolyF<Field>>& basis() const { return basis_; }

    // Buchberger with the Gebauer-Moeller pair update. Returns the reduced
    // basis; a unit ideal collapses to the single generator 1.
    void compute(std::vector<PolyF<Field>> gens) {
        // Linear pre-elimination: reduce everything by the degree-one
        // generators first; substitutions by linear polynomials cannot grow
        // degrees and typically shrink the system considerably.
        pre_eliminate_linear(gens);
        for (auto& g : gens) {
            if (g.empty()) continue;
            if (g.lm().deg == 0) {
                set_unit();
                return;
            }
            add_generator(std::move(g));
        }
        while (!pairs_.empty()) {
            std::size_t chosen = select_pair();
            Pair pair = pairs_[chosen];
            pairs_.erase(pairs_.begin() + static_cast<std::ptrdiff_t>(chosen));
            PolyF<Field> s = s_polynomial(basis_[pair.i], basis_[pair.j], pair.lcm);
            s.sugar = pair.sugar;
            PolyF<Field> h = normal_form_impl(k_, std::move(s), basis_);
            if (h.empty()) continue;
            if (h.lm().deg == 0) {
                set_unit();
                return;
            }
            add_generator(std::move(h));
        }
        interreduce();
    }

    PolyF<Field> normal_form(PolyF<Field> f) const { return normal_form_impl(k_, std::move(f), basis_); }

    bool verify_certificate() const {
        for (std::size_t i = 0; i < basis_.size(); ++i)
            for (std::size_t j = i + 1; j < basis_.size(); ++j) {
                Mono l = mono_lcm(basis_[i].lm(), basis_[j].lm());
                PolyF<Field> s = s_polynomial(basis_[i], basis_[j], l);
                if (!normal_form_impl(k_, std::move(s), basis_).empty()) return false;
            }
        return true;
    }

  private:
    void set_unit() {
        basis_.clear();
        PolyF<Field> one;
        one.t.push_back({k_.one(), Mono::one(nvars_)});
        basis_.push_back(std::move(one));
        pairs_.clear();
        unit_ = true;
    }

    PolyF<Field> s_polynomial(const PolyF<Field>& f, const PolyF<Field>& g, const Mono& l) const {
        // both monic: spoly = (l / lm f) f - (l / lm g) g
        PolyF<Field> lifted;
        Mono uf = mono_div(l, f.lm());
        lifted.t.reserve(f.t.size());
        for (const auto& term : f.t) lifted.t.push_back({term.c, mono_mul(term.m, uf)});
        lifted.sugar = f.sugar + uf.deg;
        Mono ug = mono_div(l, g.lm());
        return sub_scaled(k_, lifted, g, k_.one(), ug);
    }

    void pre_eliminate_linear(std::vector<PolyF<Field>>& gens) {
        std::vector<PolyF<Field>> linear;
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto& g : gens) {
                if (g.empty()) continue;
                PolyF<Field> r = normal_form_impl(k_, std::move(g), linear);
                g = std::move(r);
                if (!g.empty() && g.lm().deg == 1) {
                    make_monic(k_, g);
                    // tail-reduce the existing linear set by the new one
                    linear.push_back(g);
                    g.t.clear();
                    for (std::size_t li = 0; li + 1 < linear.size(); ++li)
                        linear[li] = normal_form_impl(k_, std::move(linear[li]), linear,
                                                      static_cast<int>(li));
                    changed = true;
                }
            }
        }
        for (auto& l : linear) {
            if (!l.empty()) gens.push_back(std::move(l));
        }
    }

    void add_generator(PolyF<Field> h) {
        make_monic(k_, h);
        int t = static_cast<int>(basis_.size());

        // Gebauer-Moeller update of the pair queue.
        struct Cand {
            int i;
            Mono lcm;
            bool coprime;
        };
        std::vector<Cand> cands;
        cands.reserve(basis_.size());
        for (int i = 0; i < t; ++i) {
            if (basis_[i].empty()) continue;
            cands.push_back({i, mono_lcm(basis_[i].lm(), h.lm()), mono_coprime(basis_[i].lm(), h.lm())});
        }
        // criterion M: drop candidates whose lcm is a proper multiple of
        // another candidate's lcm
        std::vector<bool> dropped(cands.size(), false);
        for (std::size_t a = 0; a < cands.size(); ++a) {
            if (dropped[a]) continue;
            for (std::size_t b = 0; b < cands.size(); ++b) {
                if (a == b || dropped[a]) continue;
                if (!mono_eq(cands[b].lcm, cands[a].lcm) && mono_divides(cands[b].lcm, cands[a].lcm) &&
                    !dropped[b])
                    dropped[a] = true;
            }
        }
        // criterion F: among equal lcms keep one, unless some member is a
        // coprime pair (criterion B), in which case drop the whole class
        for (std::size_t a = 0; a < cands.size(); ++a) {
            if (dropped[a]) continue;
            bool class_coprime = cands[a].coprime;
            for (std::size_t b = a + 1; b < cands.size(); ++b) {
                if (dropped[b] || !mono_eq(cands[a].lcm, cands[b].lcm)) continue;
                class_coprime = class_coprime || cands[b].coprime;
                dropped[b] = true;
            }
            if (class_coprime) dropped[a] = true;
        }
        // prune old pairs superseded by the new generator
        std::vector<Pair> kept;
        kept.reserve(pairs_.size());
        for (const Pair& pr : pairs_) {
            Mono li = mono_lcm(basis_[pr.i].lm(), h.lm());
            Mono lj = mono_lcm(basis_[pr.j].lm(), h.lm());
            bool superseded = mono_divides(h.lm(), pr.lcm) && !mono_eq(li, pr.lcm) && !mono_eq(lj, pr.lcm);
            if (!superseded) kept.push_back(pr);
        }
        pairs_ = std::move(kept);
        for (std::size_t a = 0; a < cands.size(); ++a) {
            if (dropped[a]) continue;
            const Mono& l = cands[a].lcm;
            int i = cands[a].i;
            int sugar = std::max(basis_[i].sugar + l.deg - basis_[i].lm().deg,
                                 h.sugar + l.deg - h.lm().deg);
            pairs_.push_back({i, t, l, sugar});
        }
        basis_.push_back(std::move(h));
    }

    std::size_t select_pair() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pairs_.size(); ++i) {
            int cmp = mono_cmp(pairs_[i].lcm, pairs_[best].lcm);
            if (cmp < 0 || (cmp == 0 && (pairs_[i].sugar < pairs_[best].sugar ||
                                         (pairs_[i].sugar == pairs_[best].sugar &&
                                          std::pair(pairs_[i].i, pairs_[i].j) <
                                              std::pair(pairs_[best].i, pairs_[best].j)))))
                best = i;
        }
        return best;
    }

    void interreduce() {
        // drop generators whose leading monomial is divisible by another's
        std::vector<PolyF<Field>> kept;
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            if (basis_[i].empty()) continue;
            bool redundant = false;
            for (std::size_t j = 0; j < basis_.size(); ++j) {
                if (i == j || basis_[j].empty()) continue;
                if (mono_divides(basis_[j].lm(), basis_[i].lm())) {
                    if (!mono_eq(basis_[j].lm(), basis_[i].lm()) || j < i) {
                        redundant = true;
                        break;
                    }
                }
            }
            if (!redundant) kept.push_back(std::move(basis_[i]));
        }
        basis_ = std::move(kept);
        for (std::size_t i = 0; i < basis_.size(); ++i)
            basis_[i] = normal_form_impl(k_, std::move(basis_[i]), basis_, static_cast<int>(i));
        std::erase_if(basis_, [](const PolyF<Field>& f) { return f.empty(); });
        for (auto& f : basis_) make_monic(k_, f);
        std::sort(basis_.begin(), basis_.end(),
                  [](const PolyF<Field>& a, const PolyF<Field>& b) { return mono_cmp(a.lm(), b.lm()) < 0; });
    }

    Field k_;
    std::size_t nvars_;
    std::vector<PolyF<Field>> basis_;
    std::vector<Pair> pairs_;
    bool unit_ = false;
};

}  // namespace gb_detail

class GroebnerBasis {
  public:
    GroebnerBasis(MonomialOrder order, CoefficientField field, const std::vector<Poly>& gens)
        : order_(std::move(order)), field_(field) {
        columns_.clear();
        for (std::size_t i = 0; i < order_.vars.size(); ++i) columns_[order_.vars[i]] = static_cast<int>(i);
        if (field_.type == CoefficientField::Type::Prime) {
            gb_detail::Engine<gb_detail::FpField> engine(gb_detail::FpField{field_.prime},
                                                         order_.vars.size());
            engine.compute(convert_all<gb_detail::FpField>(gens, gb_detail::FpField{field_.prime}));
            engine_fp_.emplace(std::move(engine));
        } else {
            gb_detail::Engine<gb_detail::QQField> engine(gb_detail::QQField{}, order_.vars.size());
            engine.compute(convert_all<gb_detail::QQField>(gens, gb_detail::QQField{}));
            engine_qq_.emplace(std::move(engine));
        }
    }

    const MonomialOrder& order() const { return order_; }
    const CoefficientField& field() const { return field_; }

    // Reduced generators, lifted back to integer polynomials (primitive with
    // positive leading coefficient in rational mode; representatives in
    // [0, p) in prime mode).
    std::vector<Poly> generators() const {
        std::vector<Poly> out;
        if (engine_fp_) {
            for (const auto& f : engine_fp_->basis()) out.push_back(to_poly_fp(f));
        } else {
            for (const auto& f : engine_qq_->basis()) out.push_back(to_poly_qq(f));
        }
        return out;
    }

    bool is_unit_ideal() const {
        if (engine_fp_)
            return engine_fp_->basis().size() == 1 && engine_fp_->basis()[0].lm().deg == 0;
        return engine_qq_->basis().size() == 1 && engine_qq_->basis()[0].lm().deg == 0;
    }

    Poly normal_form(const Poly& f) const {
        if (engine_fp_) {
            auto nf = engine_fp_->normal_form(
                convert<gb_detail::FpField>(f, gb_detail::FpField{field_.prime}, /*reject_zero=*/false));
            return to_poly_fp(nf);
        }
        auto nf = engine_qq_->normal_form(convert<gb_detail::QQField>(f, gb_detail::QQField{}, false));
        return to_poly_qq(nf);
    }

    bool in_ideal(const Poly& f) const { return normal_form(f).is_zero(); }

    bool verify_certificate() const {
        return engine_fp_ ? engine_fp_->verify_certificate() : engine_qq_->verify_certificate();
    }

  private:
    template <class Field>
    gb_detail::PolyF<Field> convert(const Poly& p, const Field& k, bool reject_zero = true) const {
        gb_detail::PolyF<Field> f;
        std::vector<std::pair<gb_detail::Mono, typename Field::Elem>> terms;
        for (const auto& [mono, coeff] : p.terms()) {
            gb_detail::Mono m = gb_detail::Mono::one(order_.vars.size());
            for (const auto& [v, e] : mono.entries()) {
                auto it = columns_.find(v);
                if (it == columns_.end())
                    throw Error("generator uses a variable outside the monomial order");
                m.e[static_cast<std::size_t>(it->second)] = static_cast<gb_detail::Expt>(e);
                m.deg += e;
            }
            auto c = k.from_int(coeff);
            if (!k.is_zero(c)) terms.emplace_back(std::move(m), std::move(c));
        }
        if (terms.empty() && !p.is_zero() && reject_zero)
            throw PrimeCollision("a nonzero generator vanishes modulo the chosen prime");
        std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
            return gb_detail::mono_cmp(a.first, b.first) > 0;
        });
        f.t.reserve(terms.size());
        for (auto& [m, c] : terms) f.t.push_back({std::move(c), std::move(m)});
        f.sugar = f.empty() ? 0 : f.lm().deg;
        return f;
    }

    template <class Field>
    std::vector<gb_detail::PolyF<Field>> convert_all(const std::vector<Poly>& gens, const Field& k) const {
        std::vector<gb_detail::PolyF<Field>> out;
        out.reserve(gens.size());
        for (const Poly& p : gens) {
            if (p.is_zero()) continue;
            out.push_back(convert<Field>(p, k));
        }
        if (out.empty()) throw Error("empty generating set");
        return out;
    }

    Monomial to_monomial(const gb_detail::Mono& m) const {
        Monomial out;
        for (std::size_t i = 0; i < m.e.size(); ++i)
            if (m.e[i] != 0) out = out.times(Monomial::variable(order_.vars[i], m.e[i]));
        return out;
    }

    Poly to_poly_fp(const gb_detail::PolyF<gb_detail::FpField>& f) const {
        Poly out;
        for (const auto& term : f.t)
            out.add_term(to_monomial(term.m), Int(static_cast<unsigned long>(term.c)));
        return out;
    }

    Poly to_poly_qq(const gb_detail::PolyF<gb_detail::QQField>& f) const {
        Int den_lcm(1);
        for (const auto& term : f.t) den_lcm = lcm(den_lcm, Int(term.c.get_den()));
        Poly out;
        for (const auto& term : f.t)
            out.add_term(to_monomial(term.m), Int(term.c.get_num()) * (den_lcm / Int(term.c.get_den())));
        if (out.is_zero()) return out;
        Int g = out.content();
        if (g > 1) out.divide_exact(g);
        return out;
    }

    MonomialOrder order_;
    CoefficientField field_;
    std::map<DiffVar, int> columns_;
    std::optional<gb_detail::Engine<gb_detail::FpField>> engine_fp_;
    std::optional<gb_detail::Engine<gb_detail::QQField>> engine_qq_;
};

inline GroebnerBasis buchberger(const std::vector<Poly>& gens, const MonomialOrder& order,
                                const CoefficientField& field) {
    return GroebnerBasis(order, field, gens);
}

inline bool contains_one(const GroebnerBasis& gb) { return gb.is_unit_ideal(); }

inline Poly normal_form(const Poly& f, const GroebnerBasis& gb) { return gb.normal_form(f); }

inline bool verify_buchberger_certificate(const GroebnerBasis& gb) { return gb.verify_certificate(); }

}  // namespace structid

#endif  // STRUCTID_GROEBNER_HPP
