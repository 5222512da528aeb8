#ifndef STRUCTID_MODEL_HPP
#define STRUCTID_MODEL_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "structid/poly.hpp"

namespace structid {

class ValidationError : public Error {
  public:
    enum class Kind { UndeclaredSymbol, DuplicateName, ZeroDenominator, EmptyOutputs, EmptyStates };

    ValidationError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

// The parsed ODE system: x' = f(x, mu, u), y = g(x, mu, u), x(0) = x*.
// Initial conditions are implicit: state i contributes the parameter symbol
// "<state name>*" with DiffVar (Param, lambda + i, 0). The combined parameter
// vector theta is (mu_1..mu_lambda, x*_1..x*_n), s = lambda + n.
struct Model {
    std::string name;
    std::vector<std::string> params;
    std::vector<std::string> inputs;
    std::vector<std::pair<std::string, RatFunc>> states;   // x_i' = f_i
    std::vector<std::pair<std::string, RatFunc>> outputs;  // y_j = g_j

    int n() const { return static_cast<int>(states.size()); }
    int m() const { return static_cast<int>(outputs.size()); }
    int lambda() const { return static_cast<int>(params.size()); }
    int theta_count() const { return lambda() + n(); }

    DiffVar ic_var(int state_index) const { return param_var(lambda() + state_index); }

    DiffVar theta_var(int i) const { return param_var(i); }

    std::string theta_name(int i) const {
        if (i < lambda()) return params[i];
        return states[i - lambda()].first + "*";
    }

    std::optional<int> theta_index(const std::string& name) const {
        for (int i = 0; i < theta_count(); ++i)
            if (theta_name(i) == name) return i;
        return std::nullopt;
    }

    // Resolves an identifier usable on a right-hand side (param, state or
    // input at order 0). Outputs and initial conditions are not addressable.
    std::optional<DiffVar> resolve(const std::string& ident) const {
        for (int i = 0; i < lambda(); ++i)
            if (params[i] == ident) return param_var(i);
        for (int i = 0; i < n(); ++i)
            if (states[i].first == ident) return state_var(i);
        for (int i = 0; i < static_cast<int>(inputs.size()); ++i)
            if (inputs[i] == ident) return input_var(i);
        return std::nullopt;
    }

    std::string var_name(DiffVar v) const {
        std::string base;
        switch (v.kind) {
            case VarKind::Param:
                base = v.index < lambda() ? params[v.index] : states[v.index - lambda()].first + "*";
                break;
            case VarKind::State:
                base = states[v.index].first;
                break;
            case VarKind::Output:
                base = outputs[v.index].first;
                break;
            case VarKind::Input:
                base = inputs[v.index];
                break;
            case VarKind::Aux:
                base = v.index == 0 ? "z" : (v.index == 1 ? "w" : "aux" + std::to_string(v.index));
                break;
        }
        if (v.order == 0) return base;
        if (v.order <= 3) return base + std::string(static_cast<std::size_t>(v.order), '\'');
        return base + "^(" + std::to_string(v.order) + ")";
    }

    friend bool operator==(const Model&, const Model&) = default;
};

namespace detail {

inline void check_rhs_symbols(const Model& model, const RatFunc& rf, const std::string& where) {
    for (const Poly* part : {&rf.num(), &rf.den()}) {
        for (DiffVar v : part->variables()) {
            bool ok = v.order == 0;
            switch (v.kind) {
                case VarKind::Param: ok = ok && v.index >= 0 && v.index < model.lambda(); break;
                case VarKind::State: ok = ok && v.index >= 0 && v.index < model.n(); break;
                case VarKind::Input:
                    ok = ok && v.index >= 0 && v.index < static_cast<int>(model.inputs.size());
                    break;
                default: ok = false; break;
            }
            if (!ok)
                throw ValidationError(ValidationError::Kind::UndeclaredSymbol,
                                      "right-hand side of " + where +
                                          " uses a symbol that is not a declared parameter, state or "
                                          "input at order 0");
        }
    }
}

}  // namespace detail

inline void validate_model(const Model& model) {
    if (model.states.empty())
        throw ValidationError(ValidationError::Kind::EmptyStates, "model must declare at least one state");
    if (model.outputs.empty())
        throw ValidationError(ValidationError::Kind::EmptyOutputs, "model must declare at least one output");

    std::map<std::string, int> seen;
    auto declare = [&seen](const std::string& name) {
        if (name.empty())
            throw ValidationError(ValidationError::Kind::DuplicateName, "empty symbol name");
        if (++seen[name] > 1)
            throw ValidationError(ValidationError::Kind::DuplicateName, "duplicate symbol: " + name);
    };
    for (const auto& p : model.params) declare(p);
    for (const auto& u : model.inputs) declare(u);
    for (const auto& [x, f] : model.states) declare(x);
    for (const auto& [y, g] : model.outputs) declare(y);

    for (const auto& [x, f] : model.states) {
        if (f.den().is_zero())
            throw ValidationError(ValidationError::Kind::ZeroDenominator,
                                  "zero denominator in the equation for " + x + "'");
        detail::check_rhs_symbols(model, f, x + "'");
    }
    for (const auto& [y, g] : model.outputs) {
        if (g.den().is_zero())
            throw ValidationError(ValidationError::Kind::ZeroDenominator,
                                  "zero denominator in the equation for " + y);
        detail::check_rhs_symbols(model, g, y);
    }
}

// The pairwise-distinct denominators of f and g after normalization. Their
// product is a valid common denominator (not a true lcm; it can only enlarge
// the degree statistics, which keeps the probability bounds conservative).
inline std::vector<Poly> distinct_denominators(const Model& model) {
    std::vector<Poly> dens;
    auto consider = [&dens](const Poly& d) {
        if (d == Poly::constant(1)) return;
        for (const Poly& seen : dens)
            if (seen == d) return;
        dens.push_back(d);
    };
    for (const auto& [x, f] : model.states) consider(f.den());
    for (const auto& [y, g] : model.outputs) consider(g.den());
    return dens;
}

inline Poly common_denominator(const Model& model) {
    Poly q = Poly::constant(1);
    for (const Poly& d : distinct_denominators(model)) q = q * d;
    return q;
}

// d0 = max(deg Qf, deg Qg, deg Q). Total degree is additive over products in
// an integral domain, so deg(Q*f_i) = deg Q + deg num_i - deg den_i without
// performing the division.
inline int degree_stat_d0(const Model& model, const Poly& q) {
    int d0 = q.total_degree();
    auto consider = [&d0, &q](const RatFunc& rf) {
        if (rf.num().is_zero()) return;
        int d = q.total_degree() + rf.num().total_degree() - rf.den().total_degree();
        if (d > d0) d0 = d;
    };
    for (const auto& [x, f] : model.states) consider(f);
    for (const auto& [y, g] : model.outputs) consider(g);
    return d0;
}

}  // namespace structid

#endif  // STRUCTID_MODEL_HPP
