#ifndef STRUCTID_LINALG_HPP
#define STRUCTID_LINALG_HPP

#include <span>
#include <string>
#include <vector>

#include "structid/diffpoly.hpp"

namespace structid {

class DimensionMismatch : public Error {
  public:
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

class RatMatrix {
  public:
    RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), entries_(std::size_t(rows) * cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rat& at(int r, int c) { return entries_[std::size_t(r) * cols_ + c]; }
    const Rat& at(int r, int c) const { return entries_[std::size_t(r) * cols_ + c]; }

  private:
    int rows_, cols_;
    std::vector<Rat> entries_;
};

namespace linalg_detail {

// Row-wise denominator clearing; scaling rows by positive rationals does not
// change the rank.
inline std::vector<std::vector<Int>> to_integer_rows(const RatMatrix& m) {
    std::vector<std::vector<Int>> a(m.rows(), std::vector<Int>(m.cols()));
    for (int r = 0; r < m.rows(); ++r) {
        Int l(1);
        for (int c = 0; c < m.cols(); ++c) l = lcm(l, Int(m.at(r, c).get_den()));
        for (int c = 0; c < m.cols(); ++c)
            a[r][c] = Int(m.at(r, c).get_num()) * (l / Int(m.at(r, c).get_den()));
    }
    return a;
}

// Fraction-free (Bareiss) elimination; pivots are the first nonzero entry
// scanning top-to-bottom within the leftmost eligible column.
inline int integer_rank(std::vector<std::vector<Int>>& a) {
    if (a.empty()) return 0;
    int rows = static_cast<int>(a.size());
    int cols = static_cast<int>(a[0].size());
    Int prev(1);
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r) {
            if (a[r][col] != 0) {
                piv = r;
                break;
            }
        }
        if (piv < 0) continue;
        if (piv != rank) std::swap(a[piv], a[rank]);
        for (int r = rank + 1; r < rows; ++r) {
            for (int c = col + 1; c < cols; ++c) {
                Int t = a[r][c] * a[rank][col] - a[r][col] * a[rank][c];
                Int q;
                mpz_divexact(q.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a[r][c] = q;
            }
            a[r][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

}  // namespace linalg_detail

inline int rank(const RatMatrix& m) {
    auto a = linalg_detail::to_integer_rows(m);
    return linalg_detail::integer_rank(a);
}

// (rank(M), rank(M with e appended as an extra row)).
inline std::pair<int, int> rank_with_extra_row(const RatMatrix& m, std::span<const Rat> e) {
    if (static_cast<int>(e.size()) != m.cols())
        throw DimensionMismatch("extra row has " + std::to_string(e.size()) + " entries, matrix has " +
                                std::to_string(m.cols()) + " columns");
    RatMatrix stacked(m.rows() + 1, m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) stacked.at(r, c) = m.at(r, c);
    for (int c = 0; c < m.cols(); ++c) stacked.at(m.rows(), c) = e[c];
    return {rank(m), rank(stacked)};
}

// An ordered sequence of polynomials with designated leaders (triangular set).
struct PolySystem {
    struct Equation {
        Poly poly;
        DiffVar leader;
    };
    std::vector<Equation> equations;

    std::size_t size() const { return equations.size(); }
};

class LeaderCoefficientZero : public Error {
  public:
    LeaderCoefficientZero(std::size_t equation_index, const std::string& msg)
        : Error(msg), equation_index(equation_index) {}
    std::size_t equation_index;
};

class MissingPrerequisite : public Error {
  public:
    MissingPrerequisite(std::size_t equation_index, const std::string& msg)
        : Error(msg), equation_index(equation_index) {}
    std::size_t equation_index;
};

// Solves a triangular system in which each equation, after substituting the
// presets and previously solved leaders, is linear in its leader. Returns the
// presets extended by a value for every leader; every equation evaluates to
// exactly zero at the returned point.
inline PointAssignment solve_triangular(const PolySystem& system, const PointAssignment& presets) {
    PointAssignment point = presets;
    for (std::size_t idx = 0; idx < system.equations.size(); ++idx) {
        const auto& [poly, leader] = system.equations[idx];
        Rat lead_coeff(0), rest(0);
        for (const auto& [mono, coeff] : poly.terms()) {
            int e = mono.exponent_of(leader);
            if (e > 1)
                throw MissingPrerequisite(idx, "equation " + std::to_string(idx) +
                                                   " is not linear in its leader");
            try {
                if (e == 1)
                    lead_coeff += Rat(coeff) * evaluate_monomial(mono.without_one(leader), point);
                else
                    rest += Rat(coeff) * evaluate_monomial(mono, point);
            } catch (const MissingAssignment&) {
                throw MissingPrerequisite(idx, "equation " + std::to_string(idx) +
                                                   " references an unsolved variable");
            }
        }
        if (lead_coeff == 0)
            throw LeaderCoefficientZero(idx, "leader coefficient vanished in equation " +
                                                 std::to_string(idx) + " (degenerate sample point)");
        point[leader] = -rest / lead_coeff;
    }
    return point;
}

}  // namespace structid

#endif  // STRUCTID_LINALG_HPP
