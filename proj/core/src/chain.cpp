#include "rtorsion/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "rtorsion/error.hpp"

namespace rtorsion {

EquivariantComplex EquivariantComplex::from_presentation(const GroupPresentation& p) {
  EquivariantComplex c;
  const int n = p.generator_count();
  c.cells = {1, n, p.relator_count()};
  GroupRingMatrix d1(n, std::vector<GroupRingElement>(1));
  for (int j = 0; j < n; ++j) d1[j][0] = GroupRingElement(Word::generator(j)) - GroupRingElement::one();
  c.boundary = {d1, fox_matrix(p)};
  return c;
}

EquivariantComplex relift(const EquivariantComplex& c, const LiftChoice& lifts) {
  auto lift = [&](int degree, int cell) -> Word {
    if (degree >= static_cast<int>(lifts.size()) || lifts[degree].empty()) return {};
    return lifts[degree].at(cell);
  };
  EquivariantComplex out = c;
  for (int d = 1; d <= c.top(); ++d)
    for (int e = 0; e < c.cells[d]; ++e)
      for (int f = 0; f < c.cells[d - 1]; ++f) {
        const auto& entry = c.boundary[d - 1][e][f];
        if (entry.is_zero()) continue;
        out.boundary[d - 1][e][f] = lift(d, e).inverse() * entry * lift(d - 1, f);
      }
  return out;
}

template <class Scalar>
void BasedComplex<Scalar>::check(double tol) const {
  const int len = length();
  if (static_cast<int>(d.size()) != std::max(len - 1, 0))
    throw Error(Errc::DimensionMismatch, "need one differential per adjacent degree pair");
  for (int k = 0; k + 1 < len; ++k)
    if (d[k].rows() != dims[k] || d[k].cols() != dims[k + 1])
      throw Error(Errc::DimensionMismatch, "differential shape disagrees with dimensions");
  if (!homology.empty() && static_cast<int>(homology.size()) != len)
    throw Error(Errc::DimensionMismatch, "homology bases must be given for every degree or none");
  for (int k = 0; k + 2 < len; ++k) {
    const double scale = std::max(1.0, d[k].norm() * d[k + 1].norm());
    if ((d[k] * d[k + 1]).norm() > tol * scale)
      throw Error(Errc::DimensionMismatch, "consecutive differentials do not compose to zero");
  }
}

template <class Scalar>
int numerical_rank(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m, double rank_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol * s(0)) ++r;
  return r;
}

namespace {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
Mat<Scalar> random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat<Scalar> m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if constexpr (std::is_same_v<Scalar, double>)
        m(i, j) = g(rng);
      else
        m(i, j) = Scalar(g(rng), g(rng));
    }
  return m;
}

template <class Scalar>
std::vector<int> ranks_of(const BasedComplex<Scalar>& c, double tol) {
  std::vector<int> r;
  for (const auto& m : c.d) r.push_back(numerical_rank<Scalar>(m, tol));
  return r;
}

std::vector<int> betti_from_ranks(const std::vector<int>& dims, const std::vector<int>& ranks) {
  std::vector<int> b(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const int out = k > 0 ? ranks[k - 1] : 0;
    const int in = k < ranks.size() ? ranks[k] : 0;
    b[k] = dims[k] - out - in;
  }
  return b;
}

// Columns whose images form a basis of the image of m.
template <class Scalar>
std::vector<int> independent_columns(const Mat<Scalar>& m, int rank) {
  if (rank == 0) return {};
  Eigen::ColPivHouseholderQR<Mat<Scalar>> qr(m);
  std::vector<int> cols;
  for (int i = 0; i < rank; ++i) cols.push_back(qr.colsPermutation().indices()(i));
  std::sort(cols.begin(), cols.end());
  return cols;
}

bool odd_degree(int degree) { return (degree % 2 + 2) % 2 == 1; }

}  // namespace

int sign_exponent(const std::vector<int>& dims, const std::vector<int>& betti) {
  long long alpha = 0, beta = 0, n = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    alpha += dims[k];
    beta += betti[k];
    n += alpha * beta;
  }
  return static_cast<int>(n % 2);
}

template <class Scalar>
std::vector<int> homology_dimensions(const BasedComplex<Scalar>& c, double rank_tol) {
  return betti_from_ranks(c.dims, ranks_of(c, rank_tol));
}

template <class Scalar>
Scalar torsion(const BasedComplex<Scalar>& c, const TorsionOptions& opts) {
  c.check();
  const int len = c.length();
  const std::vector<int> ranks = ranks_of(c, opts.rank_tol);
  const std::vector<int> betti = betti_from_ranks(c.dims, ranks);

  for (int k = 0; k < len; ++k) {
    const int given = c.homology.empty() ? 0 : static_cast<int>(c.homology[k].cols());
    if (given != betti[k])
      throw Error(Errc::NotAcyclic, "degree " + std::to_string(c.degree(k)) + " has homology of dimension " +
                                        std::to_string(betti[k]) + " but " + std::to_string(given) +
                                        " basis vectors were given");
  }

  // lifts[k]: vectors in degree k mapping onto a basis of the image of d[k-1].
  std::vector<Mat<Scalar>> lifts(len);
  for (int k = 0; k < len; ++k) {
    if (k == 0) {
      lifts[k] = Mat<Scalar>(c.dims[0], 0);
      continue;
    }
    const Mat<Scalar>& dk = c.d[k - 1];
    const int r = ranks[k - 1];
    const auto cols = independent_columns<Scalar>(dk, r);
    Mat<Scalar> l = Mat<Scalar>::Zero(c.dims[k], r);
    for (int i = 0; i < r; ++i) l(cols[i], i) = Scalar(1);
    if (opts.rng && r > 0) {
      l = l * random_matrix<Scalar>(r, r, *opts.rng);
      Eigen::JacobiSVD<Mat<Scalar>> svd(dk, Eigen::ComputeFullV);
      const int nullity = c.dims[k] - r;
      if (nullity > 0) {
        const Mat<Scalar> kernel = svd.matrixV().rightCols(nullity);
        l += kernel * random_matrix<Scalar>(nullity, r, *opts.rng);
      }
    }
    lifts[k] = l;
  }

  Scalar tau(1);
  for (int k = 0; k < len; ++k) {
    const int in = k + 1 < len ? ranks[k] : 0;
    Mat<Scalar> m(c.dims[k], c.dims[k]);
    int col = 0;
    if (in > 0) {
      m.middleCols(col, in) = c.d[k] * lifts[k + 1];
      col += in;
    }
    if (betti[k] > 0) {
      Mat<Scalar> h = c.homology[k];
      if (k > 0) {
        const double scale = std::max(1.0, h.norm()) * std::max(1.0, c.d[k - 1].norm());
        if ((c.d[k - 1] * h).norm() > 1e-8 * scale)
          throw Error(Errc::DegenerateBasis, "homology representative is not a cycle");
      }
      if (opts.rng && k + 1 < len) h += c.d[k] * random_matrix<Scalar>(c.dims[k + 1], betti[k], *opts.rng);
      m.middleCols(col, betti[k]) = h;
      col += betti[k];
    }
    m.middleCols(col, lifts[k].cols()) = lifts[k];
    if (numerical_rank<Scalar>(m, opts.rank_tol) < c.dims[k])
      throw Error(Errc::DegenerateBasis, "degree " + std::to_string(c.degree(k)) +
                                             ": boundaries, homology and lifts do not form a basis");
    const Scalar det = c.dims[k] == 0 ? Scalar(1) : m.partialPivLu().determinant();
    if (odd_degree(c.degree(k) + 1))
      tau /= det;
    else
      tau *= det;
  }
  if (sign_exponent(c.dims, betti) != 0) tau = -tau;
  return tau;
}

ComplexComplex LaurentComplex::evaluate(std::complex<double> t) const {
  ComplexComplex c;
  c.lowest = lowest;
  c.dims = dims;
  for (const auto& m : d) c.d.push_back(m.evaluate(t));
  return c;
}

namespace {

int permutation_sign(const std::vector<int>& seq) {
  int inversions = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace

RationalTorsion torsion_rational(const LaurentComplex& c, std::mt19937_64& rng) {
  const int len = static_cast<int>(c.dims.size());
  std::uniform_real_distribution<double> angle(0.1, 2.0 * std::numbers::pi - 0.1);
  const std::complex<double> t0 = std::polar(1.0, angle(rng));
  const ComplexComplex num = c.evaluate(t0);
  num.check(1e-8);
  const auto ranks = ranks_of(num, 1e-10);
  const auto betti = betti_from_ranks(num.dims, ranks);
  for (int b : betti)
    if (b != 0) throw Error(Errc::NotAcyclic, "twisted complex has nonzero homology at a generic point");

  // selected[k]: basis vectors of degree k whose images span the image of the
  // outgoing differential; the rest index the rows of the incoming minor.
  std::vector<std::vector<int>> selected(len);
  for (int i = 0; i < c.dims[len - 1]; ++i) selected[len - 1].push_back(i);
  RationalTorsion out{LaurentPoly(1.0), LaurentPoly(1.0)};
  for (int k = len - 2; k >= 0; --k) {
    const auto& above = selected[k + 1];
    Eigen::MatrixXcd block(num.dims[k], static_cast<int>(above.size()));
    for (std::size_t j = 0; j < above.size(); ++j) block.col(static_cast<int>(j)) = num.d[k].col(above[j]);
    const int r = static_cast<int>(above.size());
    std::vector<int> rows = independent_columns<std::complex<double>>(block.transpose(), r);
    std::vector<int> rest;
    for (int i = 0; i < c.dims[k]; ++i)
      if (!std::binary_search(rows.begin(), rows.end(), i)) rest.push_back(i);
    selected[k] = rest;

    std::vector<int> seq = rows;
    seq.insert(seq.end(), rest.begin(), rest.end());
    LaurentPoly minor = det(c.d[k].submatrix(rows, above));
    if (minor.is_zero()) throw Error(Errc::NotAcyclic, "selected minor vanishes identically");
    if (permutation_sign(seq) < 0) minor = -minor;
    if (odd_degree(c.lowest + k + 1))
      out.denominator *= minor;
    else
      out.numerator *= minor;
  }
  if (!selected[0].empty()) throw Error(Errc::NotAcyclic, "bottom differential is not onto");

  const std::complex<double> t1 = std::polar(1.0, angle(rng));
  const std::complex<double> expected = torsion(c.evaluate(t1));
  const std::complex<double> got = out(t1);
  if (std::abs(got - expected) > 1e-6 * std::max(1.0, std::abs(expected)))
    throw Error(Errc::DegenerateBasis, "minor expansion disagrees with the numerical torsion");
  return out;
}

Eigen::Matrix3d adjoint_evaluate(const GroupRingElement& g, std::span<const Eigen::Matrix3d> ad,
                                 std::span<const Eigen::Matrix3d> ad_inv) {
  return evaluate<Eigen::Matrix3d>(g, ad, ad_inv);
}

LaurentComplex alpha_rho_chain_complex(const EquivariantComplex& c, std::span<const SU2Element> rho,
                                       const Abelianization& alpha) {
  std::vector<Eigen::MatrixXcd> mats;
  for (const auto& g : rho) mats.push_back(g.matrix());
  LaurentComplex out;
  out.lowest = 0;
  for (int cells : c.cells) out.dims.push_back(2 * cells);
  for (int d = 1; d <= c.top(); ++d) {
    LaurentMatrix m(2 * c.cells[d - 1], 2 * c.cells[d]);
    for (int e = 0; e < c.cells[d]; ++e)
      for (int f = 0; f < c.cells[d - 1]; ++f) {
        const auto& entry = c.boundary[d - 1][e][f];
        if (!entry.is_zero()) m.set_block(2 * f, 2 * e, evaluate_twisted(entry.bar(), mats, alpha));
      }
    out.d.push_back(std::move(m));
  }
  return out;
}

RealComplex adjoint_cochain_complex(const EquivariantComplex& c, std::span<const SU2Element> rho,
                                    const Eigen::Matrix3d& basis) {
  std::vector<Eigen::Matrix3d> ad, ad_inv;
  const Eigen::Matrix3d binv = basis.inverse();
  for (const auto& g : rho) {
    ad.push_back(binv * g.adjoint() * basis);
    ad_inv.push_back(binv * g.inverse().adjoint() * basis);
  }
  const int top = c.top();
  RealComplex out;
  out.lowest = -top;
  for (int k = 0; k <= top; ++k) out.dims.push_back(3 * c.cells[top - k]);
  for (int k = 0; k < top; ++k) {
    const int deg = top - k;  // rows: cochains on deg-cells, cols: on (deg-1)-cells
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3 * c.cells[deg], 3 * c.cells[deg - 1]);
    for (int e = 0; e < c.cells[deg]; ++e)
      for (int f = 0; f < c.cells[deg - 1]; ++f) {
        const auto& entry = c.boundary[deg - 1][e][f];
        if (!entry.is_zero()) m.block<3, 3>(3 * e, 3 * f) = adjoint_evaluate(entry, ad, ad_inv);
      }
    out.d.push_back(std::move(m));
  }
  return out;
}

RealComplex untwisted_chain_complex(const EquivariantComplex& c) {
  RealComplex out;
  out.dims = c.cells;
  for (int d = 1; d <= c.top(); ++d) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(c.cells[d - 1], c.cells[d]);
    for (int e = 0; e < c.cells[d]; ++e)
      for (int f = 0; f < c.cells[d - 1]; ++f)
        m(f, e) = static_cast<double>(c.boundary[d - 1][e][f].augmentation());
    out.d.push_back(std::move(m));
  }
  return out;
}

RealComplex untwisted_cochain_complex(const EquivariantComplex& c) {
  const int top = c.top();
  RealComplex out;
  out.lowest = -top;
  for (int k = 0; k <= top; ++k) out.dims.push_back(c.cells[top - k]);
  for (int k = 0; k < top; ++k) {
    const int deg = top - k;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(c.cells[deg], c.cells[deg - 1]);
    for (int e = 0; e < c.cells[deg]; ++e)
      for (int f = 0; f < c.cells[deg - 1]; ++f)
        m(e, f) = static_cast<double>(c.boundary[deg - 1][e][f].augmentation());
    out.d.push_back(std::move(m));
  }
  return out;
}

template struct BasedComplex<double>;
template struct BasedComplex<std::complex<double>>;
template double torsion(const RealComplex&, const TorsionOptions&);
template std::complex<double> torsion(const ComplexComplex&, const TorsionOptions&);
template std::vector<int> homology_dimensions(const RealComplex&, double);
template std::vector<int> homology_dimensions(const ComplexComplex&, double);
template int numerical_rank(const Eigen::MatrixXd&, double);
template int numerical_rank(const Eigen::MatrixXcd&, double);

}  // namespace rtorsion
