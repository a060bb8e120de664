#include "wkspin/clifford.hpp"

namespace wkspin {

namespace {

Mat2 pauli(int k) {
  const Complex i(0.0, 1.0);
  Mat2 s;
  switch (k) {
    case 0:
      s.a = {Complex(0), Complex(1), Complex(1), Complex(0)};
      break;
    case 1:
      s.a = {Complex(0), -i, i, Complex(0)};
      break;
    default:
      s.a = {Complex(1), Complex(0), Complex(0), Complex(-1)};
      break;
  }
  return s;
}

}  // namespace

CliffordRep build_rep(int sign_choice, int orientation) {
  const Complex i(0.0, 1.0);
  CliffordRep rep;
  rep.sign_choice = sign_choice;
  rep.orientation = orientation;
  for (int k = 0; k < 3; ++k) rep.gamma[k] = (double(sign_choice) * i) * pauli(k);
  // base volume gamma1 gamma2 gamma3 = sign_choice * Id; a (1,2) swap flips it
  if (sign_choice != orientation) std::swap(rep.gamma[0], rep.gamma[1]);
  return rep;
}

Mat2 clifford_of_vector(const CliffordRep& rep, const std::array<double, 3>& v) {
  Mat2 out;
  for (int k = 0; k < 3; ++k) out = out + v[k] * rep.gamma[k];
  return out;
}

}  // namespace wkspin
