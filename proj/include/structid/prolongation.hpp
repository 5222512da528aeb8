#ifndef STRUCTID_PROLONGATION_HPP
#define STRUCTID_PROLONGATION_HPP

#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "structid/linalg.hpp"
#include "structid/model.hpp"

namespace structid {

class SamplingExhausted : public Error {
  public:
    explicit SamplingExhausted(const std::string& msg) : Error(msg) {}
};

class TruncationInvariantViolated : public Error {
  public:
    explicit TruncationInvariantViolated(const std::string& msg) : Error(msg) {}
};

// The maximal prolonged system E:
//   X[i][0] = x_i - x_i*,
//   X[i][j] = (Q x_i' - Q f_i)^(j-1)   for 1 <= j <= s,
//   Y[i][j] = (Q y_i - Q g_i)^(j)      for 0 <= j <= s.
// Output prolongations beyond order s are derived on demand by further
// differentiation (the truncation loop may need to inspect them).
struct ProlongedSystem {
    int n = 0, m = 0, s = 0;
    Poly Q;
    std::vector<std::vector<Poly>> X;
    std::vector<std::vector<Poly>> Y;

    const Poly& y_equation(int i, int j) {
        auto& chain = Y[i];
        while (static_cast<int>(chain.size()) <= j) chain.push_back(differentiate(chain.back()));
        return chain[j];
    }

    // |E| per the construction: n + n*s + m*(s+1).
    int size() const { return n + n * s + m * (s + 1); }

    std::set<DiffVar> variables() const {
        std::set<DiffVar> vs;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= s; ++j)
                for (DiffVar v : X[i][j].variables()) vs.insert(v);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j <= s; ++j)
                for (DiffVar v : Y[i][j].variables()) vs.insert(v);
        return vs;
    }

    // E ordered as a solvable triangular system: x_i from X[i][0], then
    // x_i^(j) by (j, i), then y_i^(j) by (j, i).
    PolySystem full_system() const {
        PolySystem sys;
        for (int i = 0; i < n; ++i) sys.equations.push_back({X[i][0], state_var(i, 0)});
        for (int j = 1; j <= s; ++j)
            for (int i = 0; i < n; ++i) sys.equations.push_back({X[i][j], state_var(i, j)});
        for (int j = 0; j <= s; ++j)
            for (int i = 0; i < m; ++i) sys.equations.push_back({Y[i][j], output_var(i, j)});
        return sys;
    }
};

inline ProlongedSystem build_E(const Model& model) {
    ProlongedSystem e;
    e.n = model.n();
    e.m = model.m();
    e.s = model.theta_count();
    std::vector<Poly> dens = distinct_denominators(model);
    e.Q = Poly::constant(1);
    for (const Poly& d : dens) e.Q = e.Q * d;

    // Q * rf without polynomial division: multiply the numerator by every
    // distinct denominator except rf's own (which is one of them verbatim).
    auto clear_denominator = [&dens](const RatFunc& rf) {
        Poly out = rf.num();
        for (const Poly& d : dens)
            if (!(d == rf.den())) out = out * d;
        return out;
    };

    e.X.resize(e.n);
    for (int i = 0; i < e.n; ++i) {
        e.X[i].reserve(e.s + 1);
        e.X[i].push_back(Poly::variable(state_var(i, 0)) - Poly::variable(model.ic_var(i)));
        Poly seed = e.Q * Poly::variable(state_var(i, 1)) - clear_denominator(model.states[i].second);
        e.X[i].push_back(seed);
        for (int j = 2; j <= e.s; ++j) e.X[i].push_back(differentiate(e.X[i].back()));
    }
    e.Y.resize(e.m);
    for (int i = 0; i < e.m; ++i) {
        e.Y[i].reserve(e.s + 1);
        Poly seed = e.Q * Poly::variable(output_var(i, 0)) - clear_denominator(model.outputs[i].second);
        e.Y[i].push_back(seed);
        for (int j = 1; j <= e.s; ++j) e.Y[i].push_back(differentiate(e.Y[i].back()));
    }
    return e;
}

// D1 = ceil( 2 d0 s (n+1) (1 + 2 d0 s) / (1 - p) ).
inline Int compute_D1(const Model& model, const Rat& p) {
    if (!(p > 0 && p < 1)) throw Error("probability must lie in (0, 1)");
    Poly q = common_denominator(model);
    Int d0(degree_stat_d0(model, q));
    Int s(model.theta_count());
    Int n(model.n());
    Int numerator = 2 * d0 * s * (n + 1) * (1 + 2 * d0 * s);
    return ceil_rat(Rat(numerator) / (Rat(1) - p));
}

struct SamplePoint {
    std::vector<Int> theta;                 // mu values then x* values
    std::vector<std::vector<Int>> inputs;   // per input, derivative orders 0..k
};

// Presets for the triangular solve: theta values, x_i(0) = x_i*, and the
// sampled input derivatives.
inline PointAssignment presets_from_sample(const Model& model, const SamplePoint& sample) {
    PointAssignment point;
    for (int i = 0; i < model.theta_count(); ++i) point[model.theta_var(i)] = Rat(sample.theta[i]);
    for (std::size_t k = 0; k < sample.inputs.size(); ++k)
        for (std::size_t j = 0; j < sample.inputs[k].size(); ++j)
            point[input_var(static_cast<int>(k), static_cast<int>(j))] = Rat(sample.inputs[k][j]);
    return point;
}

// Q evaluated at (theta, u_0); states at order 0 take their x* values.
inline bool q_nonzero_at(const Model& model, const Poly& q, const SamplePoint& sample) {
    PointAssignment point;
    for (int i = 0; i < model.lambda(); ++i) point[param_var(i)] = Rat(sample.theta[i]);
    for (int i = 0; i < model.n(); ++i) {
        point[model.ic_var(i)] = Rat(sample.theta[model.lambda() + i]);
        point[state_var(i, 0)] = Rat(sample.theta[model.lambda() + i]);
    }
    for (std::size_t k = 0; k < sample.inputs.size(); ++k)
        if (!sample.inputs[k].empty()) point[input_var(static_cast<int>(k), 0)] = Rat(sample.inputs[k][0]);
    return evaluate(q, point) != 0;
}

// Uniform integer vectors in [1, bound] with Q(theta, u_0) != 0, by rejection.
inline SamplePoint sample_point(const Int& bound, const Poly& q, const Model& model, int input_order,
                                Rng& rng, int retry_cap = 16) {
    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        SamplePoint sample;
        sample.theta.reserve(model.theta_count());
        for (int i = 0; i < model.theta_count(); ++i) sample.theta.push_back(rng.uniform_1_to(bound));
        sample.inputs.resize(model.inputs.size());
        for (auto& chain : sample.inputs) {
            chain.reserve(input_order + 1);
            for (int j = 0; j <= input_order; ++j) chain.push_back(rng.uniform_1_to(bound));
        }
        if (q_nonzero_at(model, q, sample)) return sample;
    }
    throw SamplingExhausted("could not sample a point with Q != 0 after " + std::to_string(retry_cap) +
                            " attempts");
}

struct TruncationResult {
    PolySystem Et;
    std::vector<int> alpha;
    std::vector<int> beta;
    std::vector<int> beta_loop_end;
    PointAssignment solved_point;
    SamplePoint sample;
    Int D1{0};
};

namespace prolong_detail {

struct EqKey {
    char family;  // 'X' or 'Y'
    int i, j;
    friend auto operator<=>(const EqKey&, const EqKey&) = default;
};

// Per-equation gradient wrt Param/State variables, evaluated at the point.
class GradientCache {
  public:
    GradientCache(ProlongedSystem& e, const PointAssignment& point) : e_(e), point_(point) {}

    const std::map<DiffVar, Rat>& gradient(EqKey key) {
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const Poly& p = key.family == 'X' ? e_.X[key.i][key.j] : e_.y_equation(key.i, key.j);
        std::map<DiffVar, Rat> grad;
        for (DiffVar v : p.variables()) {
            if (v.kind != VarKind::Param && v.kind != VarKind::State) continue;
            Rat value = evaluate(partial(p, v), point_);
            if (value != 0) grad[v] = std::move(value);
        }
        return cache_.emplace(key, std::move(grad)).first->second;
    }

  private:
    ProlongedSystem& e_;
    const PointAssignment& point_;
    std::map<EqKey, std::map<DiffVar, Rat>> cache_;
};

}  // namespace prolong_detail

// Algorithm Steps 2e-2g: the rank-driven truncation loop producing Et, alpha,
// beta. `point` must be the full solution of E at the sampled (theta, u).
inline TruncationResult truncate(ProlongedSystem& e, const PointAssignment& point) {
    using prolong_detail::EqKey;
    const int n = e.n, m = e.m, s = e.s;

    std::vector<int> alpha(n, 1), beta(m, 0);
    std::vector<EqKey> et;
    et.reserve(static_cast<std::size_t>(n) * (s + 1));
    for (int i = 0; i < n; ++i) et.push_back({'X', i, 0});
    std::set<std::pair<int, int>> xs_in_et;  // (i, j) with X[i][j] in Et
    for (int i = 0; i < n; ++i) xs_in_et.insert({i, 0});

    prolong_detail::GradientCache gradients(e, point);

    auto x_alpha_columns = [&alpha, n]() {
        std::vector<DiffVar> cols;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < alpha[i]; ++j) cols.push_back(state_var(i, j));
        return cols;
    };

    auto jacobian_rank_full = [&](EqKey candidate) {
        // theta = (mu, x*) occupies Param indices 0..s-1.
        std::vector<DiffVar> cols;
        for (int t = 0; t < s; ++t) cols.push_back(param_var(t));
        for (DiffVar v : x_alpha_columns()) cols.push_back(v);
        std::vector<EqKey> rows = et;
        rows.push_back(candidate);
        RatMatrix jac(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            const auto& grad = gradients.gradient(rows[r]);
            for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
                auto it = grad.find(cols[c]);
                if (it != grad.end()) jac.at(r, c) = it->second;
            }
        }
        return rank(jac) == static_cast<int>(rows.size());
    };

    // Step 2f2: pull in the X[i][j] for every x_i^(j) appearing in Et or in
    // the current candidates; Step 2f3: refresh alpha from Et.
    auto complete_and_refresh = [&]() {
        bool changed = true;
        while (changed) {
            changed = false;
            std::set<std::pair<int, int>> needed;
            auto scan = [&needed](const Poly& p) {
                for (DiffVar v : p.variables())
                    if (v.kind == VarKind::State && v.order >= 1) needed.insert({v.index, v.order});
            };
            for (const EqKey& key : et)
                scan(key.family == 'X' ? e.X[key.i][key.j] : e.y_equation(key.i, key.j));
            for (int k = 0; k < m; ++k) scan(e.y_equation(k, beta[k]));
            for (const auto& [i, j] : needed) {
                if (xs_in_et.count({i, j})) continue;
                if (j > s)
                    throw TruncationInvariantViolated(
                        "state prolongation beyond order s requested (degenerate sample)");
                et.push_back({'X', i, j});
                xs_in_et.insert({i, j});
                changed = true;
            }
        }
        for (int i = 0; i < n; ++i) {
            int max_ord = -1;
            for (const EqKey& key : et) {
                const Poly& p = key.family == 'X' ? e.X[key.i][key.j] : e.y_equation(key.i, key.j);
                int o = order_in(p, VarKind::State, i);
                if (o > max_ord) max_ord = o;
            }
            alpha[i] = max_ord + 1;
        }
    };

    // Step 2f: grow Et while some output prolongation keeps the Jacobian at
    // full row rank. Candidates are scanned in declaration order.
    while (true) {
        int chosen = -1;
        for (int k = 0; k < m; ++k) {
            if (jacobian_rank_full({'Y', k, beta[k]})) {
                chosen = k;
                break;
            }
        }
        if (chosen < 0) break;
        et.push_back({'Y', chosen, beta[chosen]});
        ++beta[chosen];
        complete_and_refresh();
    }

    std::vector<int> beta_loop_end = beta;
    if (std::accumulate(beta_loop_end.begin(), beta_loop_end.end(), 0) > s)
        throw TruncationInvariantViolated("sum of truncation orders exceeds s (degenerate sample)");

    // Step 2g: add the remaining output prolongations whose state variables
    // are already covered by x_alpha. A candidate with no state variables at
    // all is added once per output (it is an honest member of S_beta and
    // guarantees beta - beta_loop_end > 0) and skipped afterwards, since its
    // further derivatives carry no new information.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < m; ++i) {
            const Poly& cand = e.y_equation(i, beta[i]);
            bool has_state = false, covered = true;
            for (DiffVar v : cand.variables()) {
                if (v.kind != VarKind::State) continue;
                has_state = true;
                if (v.order >= alpha[v.index]) {
                    covered = false;
                    break;
                }
            }
            if (!covered) continue;
            if (!has_state && beta[i] > beta_loop_end[i]) continue;
            et.push_back({'Y', i, beta[i]});
            ++beta[i];
            changed = true;
        }
    }

    for (int i = 0; i < m; ++i)
        if (beta[i] <= beta_loop_end[i])
            throw TruncationInvariantViolated("output " + std::to_string(i) +
                                              " gained no prolongation in the closing step");

    TruncationResult result;
    result.alpha = alpha;
    result.beta = beta;
    result.beta_loop_end = beta_loop_end;
    result.solved_point = point;

    // Canonical triangular order: X[i][0], then X by (j, i), then Y by (j, i).
    std::set<std::pair<int, int>> ys_in_et;
    for (const EqKey& key : et)
        if (key.family == 'Y') ys_in_et.insert({key.i, key.j});
    for (int i = 0; i < n; ++i) result.Et.equations.push_back({e.X[i][0], state_var(i, 0)});
    for (int j = 1; j <= s; ++j)
        for (int i = 0; i < n; ++i)
            if (xs_in_et.count({i, j})) result.Et.equations.push_back({e.X[i][j], state_var(i, j)});
    int max_beta = 0;
    for (int i = 0; i < m; ++i) max_beta = std::max(max_beta, beta[i]);
    for (int j = 0; j < max_beta; ++j)
        for (int i = 0; i < m; ++i)
            if (ys_in_et.count({i, j})) result.Et.equations.push_back({e.y_equation(i, j), output_var(i, j)});
    return result;
}

}  // namespace structid

#endif  // STRUCTID_PROLONGATION_HPP
