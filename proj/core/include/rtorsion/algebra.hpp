#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "rtorsion/laurent.hpp"

namespace rtorsion {

struct Letter {
  int gen = 0;
  int exp = 1;  // +1 or -1
  auto operator<=>(const Letter&) const = default;
};

/// Freely reduced word in a free group. Every constructor reduces.
class Word {
 public:
  Word() = default;
  explicit Word(std::span<const Letter> letters);
  Word(std::initializer_list<Letter> letters) : Word(std::span<const Letter>(letters.begin(), letters.size())) {}

  static Word generator(int gen, int power = 1);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Word inverse() const;
  Word power(int n) const;
  int exponent_sum(int gen) const;
  int max_generator() const;  // -1 for the empty word

  friend Word operator*(const Word& a, const Word& b);
  auto operator<=>(const Word&) const = default;

 private:
  std::vector<Letter> letters_;
};

Word commutator(const Word& a, const Word& b);  // a b a^-1 b^-1

/// Parses whitespace separated tokens `g`, `g^e`, `g^-e`; a token that is not
/// a generator name but consists of single-letter generator names is read as
/// a run, with uppercase letters meaning inverses. `1` or an empty string is
/// the identity. Tokens naming an alias (e.g. `lambda^-1`) expand to its word.
Word parse_word(std::string_view text, const std::vector<std::string>& names,
                const std::map<std::string, Word, std::less<>>& aliases = {});
std::string format_word(const Word& w, const std::vector<std::string>& names);

struct Peripheral {
  Word longitude;
  Word meridian;
};

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
  std::vector<std::string> relator_names;
  std::optional<Peripheral> peripheral;

  int generator_count() const { return static_cast<int>(generators.size()); }
  int relator_count() const { return static_cast<int>(relators.size()); }
  /// Throws DimensionMismatch if a word mentions an unknown generator.
  void validate() const;
};

/// Word substitution x_j -> images[j], extended to an endomorphism of the
/// free group.
struct Endomorphism {
  std::vector<Word> images;
  Word apply(const Word& w) const;
};

/// Finitely supported integer combination of words (the integral group ring
/// of the free group).
class GroupRingElement {
 public:
  GroupRingElement() = default;
  explicit GroupRingElement(const Word& w, std::int64_t c = 1);

  static GroupRingElement one() { return GroupRingElement(Word{}); }

  const std::map<Word, std::int64_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::int64_t augmentation() const;

  void add(const Word& w, std::int64_t c);
  GroupRingElement bar() const;  // sum c_w w^{-1}
  GroupRingElement substituted(const Endomorphism& phi) const;

  GroupRingElement& operator+=(const GroupRingElement& o);
  GroupRingElement& operator-=(const GroupRingElement& o);
  friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
  friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b);
  friend GroupRingElement operator*(std::int64_t c, GroupRingElement a);
  friend GroupRingElement operator*(const Word& w, const GroupRingElement& a) { return GroupRingElement(w) * a; }
  friend GroupRingElement operator*(const GroupRingElement& a, const Word& w) { return a * GroupRingElement(w); }
  bool operator==(const GroupRingElement&) const = default;

 private:
  std::map<Word, std::int64_t> terms_;
};

std::string format_group_ring(const GroupRingElement& g, const std::vector<std::string>& names);

/// Left Fox derivative d w / d x_gen.
GroupRingElement fox_derivative(const Word& w, int gen);

/// Matrix over the group ring; rows index cells of the source, columns cells
/// of the target, coefficients act on the left.
using GroupRingMatrix = std::vector<std::vector<GroupRingElement>>;

GroupRingMatrix multiply(const GroupRingMatrix& a, const GroupRingMatrix& b);
bool is_zero(const GroupRingMatrix& m);

/// Fox matrix of a presentation: entry (i, j) = d r_i / d x_j.
GroupRingMatrix fox_matrix(const GroupPresentation& p);

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// U * A * V = D with U, V unimodular and D diagonal, d_i | d_{i+1}.
struct SmithForm {
  IntMatrix u, v;
  std::vector<std::int64_t> diagonal;  // nonzero invariant factors, positive
  int rank() const { return static_cast<int>(diagonal.size()); }
};

SmithForm smith_normal_form(const IntMatrix& a);

/// Relator exponent-sum matrix (relators x generators).
IntMatrix exponent_matrix(const GroupPresentation& p);

/// Epimorphism onto the free part of H_1, normalized by alpha(mu) = +1.
struct Abelianization {
  std::vector<int> exponents;  // alpha(x_j)
  std::vector<std::int64_t> torsion;

  int operator()(const Word& w) const;
};

/// Throws FreeRankNotOne or MeridianNotGenerator.
Abelianization abelianize(const GroupPresentation& p);

/// Integer homology ranks and torsion coefficients of a chain complex given by
/// integer boundary matrices (boundaries[i] : C_{i+1} -> C_i as cols -> rows).
struct IntegerHomology {
  std::vector<int> betti;
  std::vector<std::vector<std::int64_t>> torsion;
};
IntegerHomology integer_homology(const std::vector<int>& dims, const std::vector<IntMatrix>& boundaries);

/// Evaluates a word under generator images.
template <class Mat>
Mat evaluate_word(const Word& w, std::span<const Mat> images, std::span<const Mat> inverses) {
  Mat acc = Mat::Identity(images[0].rows(), images[0].cols());
  for (const auto& l : w.letters()) acc = acc * (l.exp > 0 ? images[l.gen] : inverses[l.gen]);
  return acc;
}

template <class Mat>
Mat evaluate(const GroupRingElement& g, std::span<const Mat> images, std::span<const Mat> inverses) {
  Mat acc = Mat::Zero(images[0].rows(), images[0].cols());
  for (const auto& [w, c] : g.terms())
    acc += static_cast<typename Mat::Scalar>(static_cast<double>(c)) * evaluate_word<Mat>(w, images, inverses);
  return acc;
}

/// Evaluates sum c_w t^{alpha(w)} rho(w) for a matrix representation rho.
LaurentMatrix evaluate_twisted(const GroupRingElement& g, std::span<const Eigen::MatrixXcd> rho,
                               const Abelianization& alpha);

}  // namespace rtorsion
