#ifndef STRUCTID_RANDOMIZE_HPP
#define STRUCTID_RANDOMIZE_HPP

#include <algorithm>
#include <optional>
#include <vector>

#include "structid/prolongation.hpp"

namespace structid {

// D2 = ceil( 6 |theta_ell| (prod_{P in Et} deg P) (1 + 2 d0 max beta) / (1-p) ).
inline Int compute_D2(int theta_ell_size, const PolySystem& et, int d0, const std::vector<int>& beta,
                      const Rat& p) {
    if (!(p > 0 && p < 1)) throw Error("probability must lie in (0, 1)");
    Int deg_product(1);
    for (const auto& eq : et.equations) {
        int d = eq.poly.total_degree();
        if (d > 1) deg_product *= d;
    }
    int max_beta = 0;
    for (int b : beta) max_beta = std::max(max_beta, b);
    Int numerator = 6 * Int(theta_ell_size) * deg_product * (1 + 2 * Int(d0) * max_beta);
    return ceil_rat(Rat(numerator) / (Rat(1) - p));
}

// Step 3 output: Et with outputs and inputs replaced by exact values, and Q
// with inputs replaced. No y- or u-variables remain.
struct SpecializedSystem {
    std::vector<Poly> Ehat;
    Poly Qhat;
    std::vector<Int> theta_hat;
    PointAssignment generating_point;  // the solved point that produced the y values
    Int D2{0};
    int retries = 0;
};

// Steps 3b-3d: sample fresh (theta, u) in [1, D2] with Q != 0, re-solve the
// triangular Et, substitute the solved y values and the u values.
inline SpecializedSystem specialize(const PolySystem& et, const Poly& q, const Model& model,
                                    const Int& d2, Rng& rng, int retry_cap = 16,
                                    const std::optional<SamplePoint>& injected = std::nullopt) {
    int max_u_order = -1;
    for (const auto& eq : et.equations)
        for (std::size_t k = 0; k < model.inputs.size(); ++k)
            max_u_order = std::max(max_u_order, order_in(eq.poly, VarKind::Input, static_cast<int>(k)));

    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        SamplePoint sample;
        if (injected) {
            sample = *injected;
        } else {
            sample = sample_point(d2, q, model, max_u_order, rng, retry_cap);
        }
        PointAssignment presets = presets_from_sample(model, sample);
        PointAssignment solved;
        try {
            solved = solve_triangular(et, presets);
        } catch (const LeaderCoefficientZero&) {
            if (injected) throw;
            continue;
        }

        PointAssignment bindings;
        for (const auto& [v, value] : solved)
            if (v.kind == VarKind::Output || v.kind == VarKind::Input) bindings[v] = value;

        SpecializedSystem out;
        out.D2 = d2;
        out.retries = attempt;
        out.theta_hat = sample.theta;
        out.generating_point = solved;
        out.Ehat.reserve(et.size());
        for (const auto& eq : et.equations) out.Ehat.push_back(substitute(eq.poly, bindings).poly);
        PointAssignment u_bindings;
        for (const auto& [v, value] : bindings)
            if (v.kind == VarKind::Input) u_bindings[v] = value;
        out.Qhat = substitute(q, u_bindings).poly;

        for (const Poly& p : out.Ehat) {
            if (p.contains_kind(VarKind::Output) || p.contains_kind(VarKind::Input))
                throw Error("internal: specialization left an output or input variable");
            if (evaluate(p, solved) != 0)
                throw Error("internal: specialized system does not vanish at its generating point");
        }
        if (evaluate(out.Qhat, solved) == 0)
            throw Error("internal: Q vanishes at the generating point after specialization");
        return out;
    }
    throw SamplingExhausted("could not specialize after " + std::to_string(retry_cap) + " attempts");
}

}  // namespace structid

#endif  // STRUCTID_RANDOMIZE_HPP
