#ifndef STRUCTID_DIFFVAR_HPP
#define STRUCTID_DIFFVAR_HPP

#include <compare>
#include <cstdint>
#include <string>

namespace structid {

// Roles of the symbols of a model. Aux is reserved for engine-internal fresh
// variables (the Rabinowitsch z and w); it never occurs in parsed models.
enum class VarKind : std::uint8_t { Input = 0, Param = 1, State = 2, Output = 3, Aux = 4 };

// A derivative-indexed variable: (kind, index within kind, derivative order).
// The member order fixes the total order Input < Param < State < Output < Aux,
// then by index, then by order.
struct DiffVar {
    VarKind kind{VarKind::Param};
    std::int32_t index{0};
    std::int32_t order{0};

    friend constexpr auto operator<=>(const DiffVar&, const DiffVar&) = default;

    constexpr DiffVar shifted(std::int32_t by) const { return DiffVar{kind, index, order + by}; }
};

inline DiffVar param_var(int index) { return DiffVar{VarKind::Param, index, 0}; }
inline DiffVar state_var(int index, int order = 0) { return DiffVar{VarKind::State, index, order}; }
inline DiffVar output_var(int index, int order = 0) { return DiffVar{VarKind::Output, index, order}; }
inline DiffVar input_var(int index, int order = 0) { return DiffVar{VarKind::Input, index, order}; }
inline DiffVar aux_var(int index) { return DiffVar{VarKind::Aux, index, 0}; }

}  // namespace structid

#endif  // STRUCTID_DIFFVAR_HPP
