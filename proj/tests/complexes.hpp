#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include <rtorsion/chain.hpp>

namespace rtorsion::test {

inline Eigen::MatrixXd well_conditioned(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) += 0.3 * g(rng);
  return a;
}

struct RandomAcyclic {
  RealComplex complex;
  double expected = 1.0;
};

// An acyclic complex assembled from pieces F --a--> F between adjacent
// degrees, then written in random bases G_k of each degree. In the new basis
// each degree-k determinant picks up det G_k, so the torsion is the product
// of a^{(-1)^{j+1}} over the pieces times det G_k^{(-1)^{k+1}}.
inline RandomAcyclic random_acyclic(std::mt19937_64& rng, int max_total) {
  std::uniform_int_distribution<int> len_d(2, 4), rank_d(0, 2);
  std::uniform_real_distribution<double> coef(0.5, 2.0), sign(-1.0, 1.0);
  for (;;) {
    const int len = len_d(rng);
    std::vector<int> ranks(len - 1);
    for (auto& r : ranks) r = rank_d(rng);
    std::vector<int> dims(len, 0);
    for (int k = 0; k + 1 < len; ++k) {
      dims[k] += ranks[k];
      dims[k + 1] += ranks[k];
    }
    int total = 0;
    for (int d : dims) total += d;
    if (total == 0 || total > max_total) continue;

    RandomAcyclic out;
    RealComplex& c = out.complex;
    c.lowest = std::uniform_int_distribution<int>(-2, 1)(rng);
    c.dims = dims;
    // down_offset[k]: first index in degree k used by the piece leaving k.
    std::vector<int> down_offset(len, 0);
    for (int k = 1; k + 1 < len; ++k) down_offset[k] = ranks[k];
    std::vector<Eigen::MatrixXd> e;
    for (int k = 0; k + 1 < len; ++k) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dims[k], dims[k + 1]);
      for (int i = 0; i < ranks[k]; ++i) {
        const double a = coef(rng) * (sign(rng) < 0 ? -1.0 : 1.0);
        m(i, down_offset[k + 1] + i) = a;
        const int j = c.degree(k);
        out.expected *= (j % 2 == 0) ? 1.0 / a : a;
      }
      e.push_back(m);
    }
    std::vector<Eigen::MatrixXd> g;
    for (int k = 0; k < len; ++k) {
      g.push_back(well_conditioned(dims[k], rng));
      if (dims[k] == 0) continue;
      const double det = g.back().determinant();
      out.expected *= (c.degree(k) % 2 == 0) ? 1.0 / det : det;
    }
    for (int k = 0; k + 1 < len; ++k) {
      Eigen::MatrixXd gi = dims[k + 1] ? Eigen::MatrixXd(g[k + 1].inverse()) : Eigen::MatrixXd(0, 0);
      c.d.push_back(g[k] * e[k] * gi);
    }
    return out;
  }
}

inline RealComplex direct_sum(const RealComplex& a, const RealComplex& b) {
  RealComplex s;
  s.lowest = a.lowest;
  for (int k = 0; k < a.length(); ++k) s.dims.push_back(a.dims[k] + b.dims[k]);
  for (int k = 0; k + 1 < a.length(); ++k) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s.dims[k], s.dims[k + 1]);
    m.topLeftCorner(a.dims[k], a.dims[k + 1]) = a.d[k];
    m.bottomRightCorner(b.dims[k], b.dims[k + 1]) = b.d[k];
    s.d.push_back(m);
  }
  return s;
}

// Block-diagonalizing the degree-k basis matrix of A + B moves the lifts of
// A (rank of d[k-1] on A) past the boundaries of B (rank of d[k] on B).
inline int direct_sum_sign(const RealComplex& a, const RealComplex& b) {
  int e = 0;
  for (int k = 1; k + 1 < a.length(); ++k) e += numerical_rank<double>(a.d[k - 1]) * numerical_rank<double>(b.d[k]);
  return e % 2 == 0 ? 1 : -1;
}

}  // namespace rtorsion::test
