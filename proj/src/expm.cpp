#include "kcsim/expm.hpp"

#include <array>
#include <cmath>

namespace kcsim {

namespace {

constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                       25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                        30270240.0,    2162160.0,    110880.0,     3960.0,
                                        90.0,          1.0};
constexpr std::array<double, 14> kPade13{
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// Largest 1-norm for which each degree meets unit roundoff (Higham 2005).
constexpr std::array<double, 5> kTheta{1.495585217958292e-2, 2.539398330063230e-1,
                                       9.504178996162932e-1, 2.097847961257068e0,
                                       5.371920351148152e0};

double norm1(const CMatrix& A) { return A.cwiseAbs().colwise().sum().maxCoeff(); }

template <std::size_t N>
CMatrix pade_low(const CMatrix& A, const std::array<double, N>& b) {
  const auto n = A.rows();
  const CMatrix I = CMatrix::Identity(n, n);
  const CMatrix A2 = A * A;
  CMatrix power = I;
  CMatrix U_inner = CMatrix::Zero(n, n);
  CMatrix V = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k + 1 < N; k += 2) {
    V += b[k] * power;
    U_inner += b[k + 1] * power;
    power = power * A2;
  }
  const CMatrix U = A * U_inner;
  return (V - U).partialPivLu().solve(V + U);
}

CMatrix pade13(const CMatrix& A) {
  const auto& b = kPade13;
  const auto n = A.rows();
  const CMatrix I = CMatrix::Identity(n, n);
  const CMatrix A2 = A * A;
  const CMatrix A4 = A2 * A2;
  const CMatrix A6 = A4 * A2;
  const CMatrix U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
                         b[3] * A2 + b[1] * I);
  const CMatrix V =
      A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  return (V - U).partialPivLu().solve(V + U);
}

}  // namespace

CMatrix expm(const CMatrix& A) {
  if (A.rows() != A.cols()) throw Error(ErrorCode::InvalidDimension, "expm needs a square matrix");
  if (A.size() == 0) return A;
  if (!A.allFinite()) throw Error(ErrorCode::NumericalFailure, "expm input is not finite");

  const double nrm = norm1(A);
  CMatrix R;
  if (nrm <= kTheta[0]) {
    R = pade_low(A, kPade3);
  } else if (nrm <= kTheta[1]) {
    R = pade_low(A, kPade5);
  } else if (nrm <= kTheta[2]) {
    R = pade_low(A, kPade7);
  } else if (nrm <= kTheta[3]) {
    R = pade_low(A, kPade9);
  } else {
    const int s = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / kTheta[4]))));
    R = pade13(A / std::ldexp(1.0, s));
    for (int i = 0; i < s; ++i) R = R * R;
  }
  if (!R.allFinite()) throw Error(ErrorCode::NumericalFailure, "matrix exponential overflowed");
  return R;
}

}  // namespace kcsim
