#ifndef STRUCTID_TESTS_HELPERS_HPP
#define STRUCTID_TESTS_HELPERS_HPP

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "structid/structid.hpp"

namespace testutil {

using namespace structid;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Model load_model(const std::string& name) {
    Model m = parse_model(read_file(std::string(STRUCTID_MODEL_DIR) + "/" + name));
    validate_model(m);
    return m;
}

// Random small polynomials over a fixed pool of variables; coefficients in
// [-9, 9], up to `max_terms` terms of degree <= 3 per variable.
class PolyGen {
  public:
    explicit PolyGen(std::uint64_t seed) : engine_(seed) {}

    Poly next(int max_terms = 5, int max_vars = 4) {
        static const std::vector<DiffVar> pool = {
            state_var(0, 0), state_var(0, 1), state_var(1, 0), param_var(0),
            param_var(1),    output_var(0, 0), input_var(0, 1), state_var(1, 2),
        };
        std::uniform_int_distribution<int> term_count(0, max_terms);
        std::uniform_int_distribution<int> coeff(-9, 9);
        std::uniform_int_distribution<int> nvars(0, 3);
        std::uniform_int_distribution<int> exp(1, 3);
        std::uniform_int_distribution<std::size_t> pick(0, std::min<std::size_t>(pool.size(), max_vars + 4) - 1);
        Poly p;
        int terms = term_count(engine_);
        for (int t = 0; t < terms; ++t) {
            Monomial m;
            int k = nvars(engine_);
            for (int v = 0; v < k; ++v) m = m.times(Monomial::variable(pool[pick(engine_)], exp(engine_)));
            p.add_term(m, Int(coeff(engine_)));
        }
        return p;
    }

    int small_int(int lo, int hi) {
        std::uniform_int_distribution<int> d(lo, hi);
        return d(engine_);
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace testutil

#endif
