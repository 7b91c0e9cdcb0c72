#include "rtorsion/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <nlohmann/json.hpp>

#include "rtorsion/error.hpp"

namespace rtorsion {

LaurentPoly::LaurentPoly(Complex constant) : coeffs_{constant} { trim(); }

LaurentPoly::LaurentPoly(int lo, std::vector<Complex> coeffs) : lo_(lo), coeffs_(std::move(coeffs)) {
  trim();
}

LaurentPoly LaurentPoly::monomial(Complex c, int exponent) { return LaurentPoly(exponent, {c}); }

void LaurentPoly::trim() {
  const double cut = kTrimTolerance * max_abs();
  auto small = [cut](Complex c) { return std::abs(c) <= cut; };
  auto first = std::find_if_not(coeffs_.begin(), coeffs_.end(), small);
  if (first == coeffs_.end()) {
    coeffs_.clear();
    lo_ = 0;
    return;
  }
  auto last = std::find_if_not(coeffs_.rbegin(), coeffs_.rend(), small).base();
  lo_ += static_cast<int>(first - coeffs_.begin());
  coeffs_ = std::vector<Complex>(first, last);
}

Complex LaurentPoly::coeff(int exponent) const {
  if (is_zero() || exponent < lo_ || exponent > hi()) return 0.0;
  return coeffs_[exponent - lo_];
}

double LaurentPoly::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Complex LaurentPoly::operator()(Complex t) const {
  if (is_zero()) return 0.0;
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc * std::pow(t, lo_);
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly r = *this;
  if (!r.is_zero()) r.lo_ += k;
  return r;
}

LaurentPoly LaurentPoly::reflected() const {
  if (is_zero()) return {};
  std::vector<Complex> c(coeffs_.rbegin(), coeffs_.rend());
  return LaurentPoly(-hi(), std::move(c));
}

LaurentPoly LaurentPoly::negated_variable() const {
  std::vector<Complex> c = coeffs_;
  for (std::size_t i = 0; i < c.size(); ++i)
    if ((lo_ + static_cast<int>(i)) % 2 != 0) c[i] = -c[i];
  return LaurentPoly(lo_, std::move(c));
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  const int lo = std::min(lo_, o.lo_);
  const int hi = std::max(this->hi(), o.hi());
  std::vector<Complex> c(hi - lo + 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[lo_ - lo + i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) c[o.lo_ - lo + i] += o.coeffs_[i];
  lo_ = lo;
  coeffs_ = std::move(c);
  trim();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return LaurentPoly(a.lo_ + b.lo_, std::move(c));
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) { return *this = *this * o; }

LaurentPoly& LaurentPoly::operator*=(Complex c) {
  for (auto& x : coeffs_) x *= c;
  trim();
  return *this;
}

double relative_distance(const LaurentPoly& a, const LaurentPoly& b) {
  const double scale = std::max({a.max_abs(), b.max_abs(), 1e-300});
  return (a - b).max_abs() / scale;
}

bool equal_up_to_unit(const LaurentPoly& a, const LaurentPoly& b, double tol) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  const LaurentPoly aligned = b.shifted(a.lo() - b.lo());
  return relative_distance(a, aligned) <= tol || relative_distance(a, -aligned) <= tol;
}

PolyDivision divide(const LaurentPoly& num, const LaurentPoly& den) {
  if (den.is_zero()) throw Error(Errc::SingularDenominator, "division by the zero polynomial");
  if (num.is_zero()) return {};
  std::vector<Complex> r = num.coeffs();
  const auto& d = den.coeffs();
  const int nd = static_cast<int>(d.size());
  const int nr = static_cast<int>(r.size());
  if (nr < nd) return {LaurentPoly{}, num};
  std::vector<Complex> q(nr - nd + 1, 0.0);
  for (int k = nr - nd; k >= 0; --k) {
    const Complex f = r[k + nd - 1] / d[nd - 1];
    q[k] = f;
    for (int j = 0; j < nd; ++j) r[k + j] -= f * d[j];
  }
  r.resize(nd - 1);
  return {LaurentPoly(num.lo() - den.lo(), std::move(q)), LaurentPoly(num.lo(), std::move(r))};
}

bool equivalent(const UnitClass& a, const UnitClass& b, double tol) {
  return equal_up_to_unit(a.numerator * b.denominator, b.numerator * a.denominator, tol);
}

bool is_palindromic(const LaurentPoly& p, double tol) {
  if (p.is_zero()) return true;
  if (p.lo() != -p.hi()) return false;
  return relative_distance(p, p.reflected()) <= tol;
}

Symmetrized symmetrize(const LaurentPoly& p, double tol) {
  if (p.is_zero()) throw Error(Errc::NoSymmetricForm, "zero polynomial");
  if ((p.lo() + p.hi()) % 2 != 0)
    throw Error(Errc::NoSymmetricForm, "support [" + std::to_string(p.lo()) + ", " +
                                           std::to_string(p.hi()) + "] has odd width");
  const int k = -(p.lo() + p.hi()) / 2;
  Symmetrized s{p.shifted(k), k, 1};
  if (!is_palindromic(s.poly, tol))
    throw Error(Errc::NoSymmetricForm, "centred polynomial is not palindromic");
  return s;
}

LaurentMatrix LaurentMatrix::identity(int n) {
  LaurentMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = LaurentPoly(1.0);
  return m;
}

LaurentMatrix LaurentMatrix::from_complex(const Eigen::MatrixXcd& m, int exponent) {
  LaurentMatrix r(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < r.rows(); ++i)
    for (int j = 0; j < r.cols(); ++j) r(i, j) = LaurentPoly::monomial(m(i, j), exponent);
  return r;
}

Eigen::MatrixXcd LaurentMatrix::evaluate(Complex t) const {
  Eigen::MatrixXcd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j)(t);
  return m;
}

LaurentMatrix LaurentMatrix::block(int r0, int c0, int nr, int nc) const {
  LaurentMatrix b(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void LaurentMatrix::set_block(int r0, int c0, const LaurentMatrix& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

LaurentMatrix LaurentMatrix::submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
  LaurentMatrix s(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
  return s;
}

LaurentMatrix& LaurentMatrix::operator+=(const LaurentMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(Errc::DimensionMismatch, "LaurentMatrix sum shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

LaurentMatrix& LaurentMatrix::operator-=(const LaurentMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(Errc::DimensionMismatch, "LaurentMatrix difference shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(Errc::DimensionMismatch, "LaurentMatrix product shape mismatch");
  LaurentMatrix r(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const LaurentPoly& x = a(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) r(i, j) += x * b(k, j);
    }
  return r;
}

LaurentPoly det_cofactor(const LaurentMatrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::DimensionMismatch, "determinant of a non-square matrix");
  const int n = m.rows();
  if (n == 0) return LaurentPoly(1.0);
  if (n == 1) return m(0, 0);
  LaurentPoly acc;
  std::vector<int> rows(n - 1);
  for (int i = 0; i < n - 1; ++i) rows[i] = i + 1;
  for (int j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    std::vector<int> cols;
    for (int c = 0; c < n; ++c)
      if (c != j) cols.push_back(c);
    LaurentPoly term = m(0, j) * det_cofactor(m.submatrix(rows, cols));
    if (j % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

LaurentPoly det_interpolate(const LaurentMatrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::DimensionMismatch, "determinant of a non-square matrix");
  const int n = m.rows();
  if (n == 0) return LaurentPoly(1.0);
  // Exponent window from the row-wise supports.
  int lo = 0, hi = 0;
  for (int i = 0; i < n; ++i) {
    int rlo = 0, rhi = 0;
    bool any = false;
    for (int j = 0; j < n; ++j) {
      const auto& e = m(i, j);
      if (e.is_zero()) continue;
      rlo = any ? std::min(rlo, e.lo()) : e.lo();
      rhi = any ? std::max(rhi, e.hi()) : e.hi();
      any = true;
    }
    if (!any) return {};
    lo += rlo;
    hi += rhi;
  }
  const int count = hi - lo + 1;
  std::vector<Complex> values(count);
  for (int k = 0; k < count; ++k) {
    const Complex w = std::polar(1.0, 2.0 * std::numbers::pi * k / count);
    values[k] = m.evaluate(w).partialPivLu().determinant() * std::pow(w, -lo);
  }
  std::vector<Complex> coeffs(count, 0.0);
  for (int e = 0; e < count; ++e) {
    Complex s = 0.0;
    for (int k = 0; k < count; ++k)
      s += values[k] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) * e / count);
    coeffs[e] = s / static_cast<double>(count);
  }
  return LaurentPoly(lo, std::move(coeffs));
}

LaurentPoly det(const LaurentMatrix& m) { return m.rows() <= 4 ? det_cofactor(m) : det_interpolate(m); }

void to_json(nlohmann::json& j, const LaurentPoly& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back({c.real(), c.imag()});
  j = {{"lo", p.lo()}, {"coeffs", coeffs}};
}

void from_json(const nlohmann::json& j, LaurentPoly& p) {
  std::vector<Complex> c;
  for (const auto& pair : j.at("coeffs")) c.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  p = LaurentPoly(j.at("lo").get<int>(), std::move(c));
}

}  // namespace rtorsion
