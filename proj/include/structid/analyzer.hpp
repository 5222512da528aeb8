#ifndef STRUCTID_ANALYZER_HPP
#define STRUCTID_ANALYZER_HPP

#include <chrono>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "structid/groebner.hpp"
#include "structid/randomize.hpp"

namespace structid {

class NotLocallyIdentifiableInput : public Error {
  public:
    explicit NotLocallyIdentifiableInput(const std::string& msg) : Error(msg) {}
};

class AnalysisAborted : public Error {
  public:
    explicit AnalysisAborted(const std::string& msg) : Error(msg) {}
};

struct AnalysisConfig {
    Rat p{Rat(99, 100)};
    enum class Method { RabinowitschUnit, IdealMembership };
    Method method = Method::RabinowitschUnit;
    CoefficientField field = CoefficientField::prime_field(CoefficientField::default_prime);
    // Positive verdicts in prime mode are re-checked under this prime; a
    // unit/membership claim must hold under both to be reported.
    std::uint64_t second_prime = 2147483629ULL;
    std::uint64_t seed = 0;
    bool check_local = true;
    bool abort_on_nonlocal = false;
    int retry_cap = 16;
    int threads = 0;  // 0: hardware concurrency
    bool verify_gb_certificate = false;
    // Test hooks replaying fixed sample vectors instead of drawing from the rng.
    std::optional<SamplePoint> injected_stage2;
    std::optional<SamplePoint> injected_stage3;
};

struct IdentifiabilityReport {
    std::string model;
    std::vector<std::string> globally_identifiable;
    std::vector<std::string> locally_only;
    std::vector<std::string> not_locally_identifiable;
    Rat p;
    std::uint64_t seed = 0;
    std::string method;

    struct Diagnostics {
        int s = 0;
        int d0 = 0;
        Int D1{0};
        Int D2{0};
        std::vector<int> alpha;
        std::vector<int> beta;
        int E_size = 0;
        int Et_size = 0;
        int retries = 0;
        std::vector<std::pair<std::string, double>> parameter_seconds;
    } diagnostics;
};

namespace analyzer_detail {

struct Stage2 {
    ProlongedSystem E;
    TruncationResult trunc;
    int retries = 0;
};

inline Stage2 run_stage2(const Model& model, const Rat& p, Rng& rng, int retry_cap,
                         const std::optional<SamplePoint>& injected, Int* d1_out) {
    Stage2 st{build_E(model), {}, 0};
    Int d1 = compute_D1(model, p);
    if (d1_out) *d1_out = d1;
    PolySystem full = st.E.full_system();
    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        st.retries = attempt;
        SamplePoint sample;
        try {
            sample = injected ? *injected : sample_point(d1, st.E.Q, model, st.E.s, rng, retry_cap);
            PointAssignment solved = solve_triangular(full, presets_from_sample(model, sample));
            st.trunc = truncate(st.E, solved);
        } catch (const LeaderCoefficientZero&) {
            if (injected) throw;
            continue;
        } catch (const TruncationInvariantViolated&) {
            if (injected) throw;
            continue;
        }
        st.trunc.sample = sample;
        st.trunc.D1 = d1;
        return st;
    }
    throw AnalysisAborted("stage 2 failed after " + std::to_string(retry_cap) + " resampling attempts");
}

// Monomial order for the consistency checks: parameters in declaration order
// (system parameters, then initial conditions), state derivatives by
// (index, order), Rabinowitsch variables last.
inline MonomialOrder step4_order(const Model& model, const std::vector<int>& alpha, int n_aux) {
    MonomialOrder order;
    for (int t = 0; t < model.theta_count(); ++t) order.vars.push_back(model.theta_var(t));
    for (int i = 0; i < model.n(); ++i)
        for (int j = 0; j < alpha[i]; ++j) order.vars.push_back(state_var(i, j));
    for (int a = 0; a < n_aux; ++a) order.vars.push_back(aux_var(a));
    return order;
}

}  // namespace analyzer_detail

// Local identifiability pre-check (Monte Carlo, correct at a generic point):
// theta_i is accepted iff its coordinate direction lies in the row space of
// the Jacobian of the truncated system with outputs and inputs evaluated,
// taken with respect to (theta, x_alpha).
inline std::pair<std::vector<std::string>, std::vector<std::string>> assess_local(
    const Model& model, const std::vector<std::string>& candidates, Rng& rng, int retry_cap = 16,
    const Rat& p = Rat(99, 100)) {
    analyzer_detail::Stage2 st = analyzer_detail::run_stage2(model, p, rng, retry_cap, std::nullopt, nullptr);

    std::vector<DiffVar> cols;
    for (int t = 0; t < model.theta_count(); ++t) cols.push_back(model.theta_var(t));
    for (int i = 0; i < model.n(); ++i)
        for (int j = 0; j < st.trunc.alpha[i]; ++j) cols.push_back(state_var(i, j));

    const PolySystem& et = st.trunc.Et;
    RatMatrix jac(static_cast<int>(et.size()), static_cast<int>(cols.size()));
    for (int r = 0; r < static_cast<int>(et.size()); ++r) {
        for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
            Poly d = partial(et.equations[r].poly, cols[c]);
            if (!d.is_zero()) jac.at(r, c) = evaluate(d, st.trunc.solved_point);
        }
    }

    std::vector<std::string> accepted, rejected;
    for (const std::string& name : candidates) {
        auto idx = model.theta_index(name);
        if (!idx) throw Error("unknown parameter: " + name);
        std::vector<Rat> unit(cols.size(), Rat(0));
        unit[static_cast<std::size_t>(*idx)] = 1;
        auto [base, stacked] = rank_with_extra_row(jac, unit);
        (base == stacked ? accepted : rejected).push_back(name);
    }
    return {accepted, rejected};
}

// Algorithm Steps 1-4 end to end. theta_ell is the set of parameter names to
// analyze; when config.check_local is set, candidates failing the local
// pre-check are excluded and reported (or rejected, with abort_on_nonlocal).
inline IdentifiabilityReport run(const Model& model, const std::vector<std::string>& theta_ell,
                                 const AnalysisConfig& config) {
    validate_model(model);
    if (!(config.p > 0 && config.p < 1)) throw Error("probability must lie in (0, 1)");

    IdentifiabilityReport report;
    report.model = model.name;
    report.p = config.p;
    report.seed = config.seed;
    report.method = config.method == AnalysisConfig::Method::RabinowitschUnit ? "sat" : "membership";

    std::vector<std::string> analyzed = theta_ell;
    for (const std::string& name : analyzed)
        if (!model.theta_index(name)) throw Error("unknown parameter: " + name);

    Rng rng(config.seed);
    if (config.check_local) {
        auto [accepted, rejected] = assess_local(model, analyzed, rng, config.retry_cap, config.p);
        if (!rejected.empty() && config.abort_on_nonlocal) {
            std::string msg = "not locally identifiable:";
            for (const auto& r : rejected) msg += " " + r;
            throw NotLocallyIdentifiableInput(msg);
        }
        analyzed = accepted;
        report.not_locally_identifiable = rejected;
    }

    analyzer_detail::Stage2 st =
        analyzer_detail::run_stage2(model, config.p, rng, config.retry_cap, config.injected_stage2,
                                    &report.diagnostics.D1);
    Poly q = common_denominator(model);
    int d0 = degree_stat_d0(model, q);
    report.diagnostics.s = model.theta_count();
    report.diagnostics.d0 = d0;
    report.diagnostics.alpha = st.trunc.alpha;
    report.diagnostics.beta = st.trunc.beta;
    report.diagnostics.E_size = st.E.size();
    report.diagnostics.Et_size = static_cast<int>(st.trunc.Et.size());

    Int d2 = compute_D2(static_cast<int>(analyzed.size()), st.trunc.Et, d0, st.trunc.beta, config.p);
    report.diagnostics.D2 = d2;
    SpecializedSystem spec =
        specialize(st.trunc.Et, st.E.Q, model, d2, rng, config.retry_cap, config.injected_stage3);
    report.diagnostics.retries = st.retries + spec.retries;

    // Step 4: per-parameter consistency checks.
    const bool sat = config.method == AnalysisConfig::Method::RabinowitschUnit;
    MonomialOrder order = analyzer_detail::step4_order(model, st.trunc.alpha, sat ? 2 : 1);
    std::vector<Poly> common = spec.Ehat;
    common.push_back(Poly::variable(aux_var(0)) * spec.Qhat - Poly::constant(1));

    auto theta_poly = [&model, &spec](int theta_idx) {
        return Poly::variable(model.theta_var(theta_idx)) - Poly::constant(spec.theta_hat[theta_idx]);
    };

    std::vector<char> verdicts(analyzed.size(), 0);
    std::vector<double> seconds(analyzed.size(), 0.0);

    if (sat) {
        auto check_one = [&](std::size_t slot, const CoefficientField& field) {
            int idx = *model.theta_index(analyzed[slot]);
            std::vector<Poly> gens = common;
            gens.push_back(Poly::variable(aux_var(1)) * theta_poly(idx) - Poly::constant(1));
            GroebnerBasis gb = buchberger(gens, order, field);
            if (config.verify_gb_certificate && !verify_buchberger_certificate(gb))
                throw Error("Buchberger certificate failed");
            return contains_one(gb);
        };
        auto worker_body = [&](std::size_t slot) {
            auto t0 = std::chrono::steady_clock::now();
            bool positive = check_one(slot, config.field);
            if (positive && config.field.type == CoefficientField::Type::Prime) {
                std::uint64_t second = config.second_prime != config.field.prime
                                           ? config.second_prime
                                           : 2147483587ULL;
                positive = check_one(slot, CoefficientField::prime_field(second));
            }
            verdicts[slot] = positive ? 1 : 0;
            seconds[slot] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        };
        unsigned hw = std::thread::hardware_concurrency();
        int nthreads = config.threads > 0 ? config.threads : static_cast<int>(hw ? hw : 1);
        nthreads = std::min<int>(nthreads, static_cast<int>(analyzed.size()));
        if (nthreads <= 1) {
            for (std::size_t slot = 0; slot < analyzed.size(); ++slot) worker_body(slot);
        } else {
            std::vector<std::thread> pool;
            std::exception_ptr failure;
            std::mutex failure_mutex;
            for (int t = 0; t < nthreads; ++t) {
                pool.emplace_back([&, t]() {
                    try {
                        for (std::size_t slot = static_cast<std::size_t>(t); slot < analyzed.size();
                             slot += static_cast<std::size_t>(nthreads))
                            worker_body(slot);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            if (failure) std::rethrow_exception(failure);
        }
    } else {
        auto t0 = std::chrono::steady_clock::now();
        GroebnerBasis gb = buchberger(common, order, config.field);
        if (config.verify_gb_certificate && !verify_buchberger_certificate(gb))
            throw Error("Buchberger certificate failed");
        double basis_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::optional<GroebnerBasis> gb2;
        for (std::size_t slot = 0; slot < analyzed.size(); ++slot) {
            auto ts = std::chrono::steady_clock::now();
            int idx = *model.theta_index(analyzed[slot]);
            bool positive = normal_form(theta_poly(idx), gb).is_zero();
            if (positive && config.field.type == CoefficientField::Type::Prime) {
                if (!gb2) {
                    std::uint64_t second = config.second_prime != config.field.prime
                                               ? config.second_prime
                                               : 2147483587ULL;
                    gb2.emplace(buchberger(common, order, CoefficientField::prime_field(second)));
                }
                positive = normal_form(theta_poly(idx), *gb2).is_zero();
            }
            verdicts[slot] = positive ? 1 : 0;
            seconds[slot] = std::chrono::duration<double>(std::chrono::steady_clock::now() - ts).count();
        }
        if (!seconds.empty()) seconds[0] += basis_seconds;
    }

    for (std::size_t slot = 0; slot < analyzed.size(); ++slot) {
        (verdicts[slot] ? report.globally_identifiable : report.locally_only).push_back(analyzed[slot]);
        report.diagnostics.parameter_seconds.emplace_back(analyzed[slot], seconds[slot]);
    }
    return report;
}

}  // namespace structid

#endif  // STRUCTID_ANALYZER_HPP
