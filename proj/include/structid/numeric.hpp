#ifndef STRUCTID_NUMERIC_HPP
#define STRUCTID_NUMERIC_HPP

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace structid {

using Int = mpz_class;
using Rat = mpq_class;

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline Int ceil_rat(const Rat& q) {
    Int quo, rem;
    mpz_fdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (rem != 0) quo += 1;
    return quo;
}

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat pow_rat(const Rat& base, unsigned long e) {
    Rat r;
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(base.get_mpq_t()), e);
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(base.get_mpq_t()), e);
    r.canonicalize();
    return r;
}

// Parses "0.99", ".5", "1/2" or plain integers into an exact rational.
inline Rat rat_from_decimal(const std::string& text) {
    if (text.empty()) throw Error("empty number");
    if (text.find('/') != std::string::npos) {
        Rat q;
        if (mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0 || q.get_den() == 0)
            throw Error("bad rational literal: " + text);
        q.canonicalize();
        return q;
    }
    std::string digits;
    std::size_t frac_len = 0;
    bool seen_dot = false, neg = false;
    std::size_t i = 0;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_dot) throw Error("bad decimal literal: " + text);
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_dot) ++frac_len;
        } else {
            throw Error("bad decimal literal: " + text);
        }
    }
    if (digits.empty()) throw Error("bad decimal literal: " + text);
    Int num(digits, 10);
    if (neg) num = -num;
    Rat q(num, pow_int(Int(10), frac_len));
    q.canonicalize();
    return q;
}

// Deterministic seeded randomness. mt19937_64 output is specified by the
// standard, so identical seeds reproduce identical draws on every platform;
// big integers are assembled from raw 64-bit words with rejection sampling.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t word() { return engine_(); }

    // Uniform in [1, bound]; bound >= 1.
    Int uniform_1_to(const Int& bound) {
        if (bound < 1) throw Error("sampling bound must be >= 1");
        std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
        std::size_t words = (bits + 63) / 64;
        while (true) {
            Int v = 0;
            for (std::size_t w = 0; w < words; ++w) {
                Int chunk(static_cast<unsigned long>(engine_() >> 32));
                chunk <<= 32;
                chunk |= Int(static_cast<unsigned long>(engine_() & 0xffffffffULL));
                v <<= 64;
                v |= chunk;
            }
            mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), bits);
            if (v < bound) return v + 1;
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace structid

#endif  // STRUCTID_NUMERIC_HPP
