#include "curvpdc/expm.hpp"

#include <array>
#include <cmath>

#include "curvpdc/common.hpp"

namespace curvpdc::linalg {

namespace {

using Matrix = Eigen::MatrixXcd;

struct PadeTerms {
  Matrix u;  // odd part
  Matrix v;  // even part
};

// Degrees 3..9 share one shape: U = A * sum b[2k+1] A^{2k}, V = sum b[2k] A^{2k}.
template <std::size_t N>
PadeTerms pade_low(const Matrix& a, const std::array<double, N>& b) {
  const auto n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix power = ident;
  Matrix odd = b[1] * ident;
  Matrix even = b[0] * ident;
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    even += b[k] * power;
    if (k + 1 < N) odd += b[k + 1] * power;
  }
  return {a * odd, even};
}

PadeTerms pade13(const Matrix& a) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const auto n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  Matrix inner_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  inner_u += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  return {a * inner_u, std::move(v)};
}

Matrix solve_pade(const PadeTerms& t) {
  const Matrix p = t.v + t.u;
  const Matrix q = t.v - t.u;
  return q.partialPivLu().solve(p);
}

}  // namespace

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("expm needs a square matrix");
  if (a.rows() == 0) return a;

  static constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
  static constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr std::array<double, 8> b7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                               25200.0,    1512.0,    56.0,      1.0};
  static constexpr std::array<double, 10> b9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                                30270240.0,    2162160.0,    110880.0,     3960.0,
                                                90.0,          1.0};
  static constexpr double theta3 = 1.495585217958292e-2;
  static constexpr double theta5 = 2.539398330063230e-1;
  static constexpr double theta7 = 9.504178996162932e-1;
  static constexpr double theta9 = 2.097847961257068e0;
  static constexpr double theta13 = 5.371920351148152e0;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 <= theta3) return solve_pade(pade_low(a, b3));
  if (norm1 <= theta5) return solve_pade(pade_low(a, b5));
  if (norm1 <= theta7) return solve_pade(pade_low(a, b7));
  if (norm1 <= theta9) return solve_pade(pade_low(a, b9));

  int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  const Matrix scaled = a / std::ldexp(1.0, squarings);
  Matrix result = solve_pade(pade13(scaled));
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace curvpdc::linalg
