#pragma once

#include <array>

#include "wkspin/mat2.hpp"

namespace wkspin {

/// Dimension-3 spin representation on 2-component spinors.
/// Invariants: gamma_i gamma_j + gamma_j gamma_i = -2 delta_ij, each gamma_i
/// anti-Hermitian, gamma1 gamma2 gamma3 = orientation * Id.
struct CliffordRep {
  std::array<Mat2, 3> gamma;
  int sign_choice;  // +-1, global sign of the generators
  int orientation;  // +-1, sign of the volume element
};

/// gamma_k = sign_choice * i * sigma_k over the Hermitian spin generators sigma_k,
/// with indices 1,2 swapped exactly when that base volume differs from the requested
/// orientation, so the volume invariant holds for every input pair.
CliffordRep build_rep(int sign_choice, int orientation);

/// Clifford action of a tangent vector: sum_k v_k gamma_k.
Mat2 clifford_of_vector(const CliffordRep& rep, const std::array<double, 3>& v);

/// Hermitian pairing, conjugate-linear in the second slot.
inline Complex pair(const Spinor& phi, const Spinor& psi) { return hermitian_pair(phi, psi); }

}  // namespace wkspin
