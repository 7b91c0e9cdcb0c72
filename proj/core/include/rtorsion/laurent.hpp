#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

namespace rtorsion {

using Complex = std::complex<double>;

/// Laurent polynomial in t with complex coefficients, stored densely from the
/// lowest exponent. Leading and trailing coefficients below
/// kTrimTolerance * max|c| are dropped on construction.
class LaurentPoly {
 public:
  static constexpr double kTrimTolerance = 1e-11;

  LaurentPoly() = default;
  LaurentPoly(Complex constant);  // NOLINT(google-explicit-constructor)
  LaurentPoly(int lo, std::vector<Complex> coeffs);

  static LaurentPoly monomial(Complex c, int exponent);

  bool is_zero() const { return coeffs_.empty(); }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
  int span() const { return is_zero() ? -1 : hi() - lo_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex coeff(int exponent) const;
  double max_abs() const;

  Complex operator()(Complex t) const;

  LaurentPoly shifted(int k) const;        // t^k * p
  LaurentPoly reflected() const;           // p(1/t)
  LaurentPoly negated_variable() const;    // p(-t)

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  LaurentPoly& operator*=(Complex c);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, Complex c) { return a *= c; }
  friend LaurentPoly operator*(Complex c, LaurentPoly a) { return a *= c; }

 private:
  void trim();

  int lo_ = 0;
  std::vector<Complex> coeffs_;
};

/// Coefficient-wise sup distance scaled by the larger of the two sup norms.
double relative_distance(const LaurentPoly& a, const LaurentPoly& b);

/// True if a = ±t^k b within `tol` relative.
bool equal_up_to_unit(const LaurentPoly& a, const LaurentPoly& b, double tol);

struct PolyDivision {
  LaurentPoly quotient;
  LaurentPoly remainder;
};

/// Long division of Laurent polynomials normalized to ordinary polynomials.
/// The remainder has exponents in [num.lo, den.span + num.lo).
PolyDivision divide(const LaurentPoly& num, const LaurentPoly& den);

/// A rational function num/den, compared up to units ±t^k. Carries the
/// Wada-invariant values, which are only defined up to such units.
struct UnitClass {
  LaurentPoly numerator;
  LaurentPoly denominator{Complex{1.0}};

  Complex operator()(Complex t) const { return numerator(t) / denominator(t); }
};

bool equivalent(const UnitClass& a, const UnitClass& b, double tol);

struct Symmetrized {
  LaurentPoly poly;  // palindromic: coeff(k) == coeff(-k)
  int shift = 0;     // poly = sign * t^shift * input
  int sign = 1;
};

/// Multiplies by the unique power of t that centres the support and checks
/// that the result is palindromic to `tol` relative. Throws NoSymmetricForm.
Symmetrized symmetrize(const LaurentPoly& p, double tol = 1e-8);

bool is_palindromic(const LaurentPoly& p, double tol);

/// Dense matrix of Laurent polynomials (row-major).
class LaurentMatrix {
 public:
  LaurentMatrix() = default;
  LaurentMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static LaurentMatrix identity(int n);
  static LaurentMatrix from_complex(const Eigen::MatrixXcd& m, int exponent = 0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  LaurentPoly& operator()(int r, int c) { return data_[r * cols_ + c]; }
  const LaurentPoly& operator()(int r, int c) const { return data_[r * cols_ + c]; }

  Eigen::MatrixXcd evaluate(Complex t) const;
  LaurentMatrix block(int r0, int c0, int nr, int nc) const;
  void set_block(int r0, int c0, const LaurentMatrix& b);
  LaurentMatrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const;

  LaurentMatrix& operator+=(const LaurentMatrix& o);
  LaurentMatrix& operator-=(const LaurentMatrix& o);
  friend LaurentMatrix operator+(LaurentMatrix a, const LaurentMatrix& b) { return a += b; }
  friend LaurentMatrix operator-(LaurentMatrix a, const LaurentMatrix& b) { return a -= b; }
  friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<LaurentPoly> data_;
};

/// Determinant: cofactor expansion up to 4x4, evaluation at roots of unity
/// followed by an inverse DFT above that.
LaurentPoly det(const LaurentMatrix& m);
LaurentPoly det_cofactor(const LaurentMatrix& m);
LaurentPoly det_interpolate(const LaurentMatrix& m);

void to_json(nlohmann::json& j, const LaurentPoly& p);
void from_json(const nlohmann::json& j, LaurentPoly& p);

}  // namespace rtorsion
