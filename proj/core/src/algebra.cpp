#include "rtorsion/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include <Eigen/LU>

#include "rtorsion/error.hpp"

namespace rtorsion {

Word::Word(std::span<const Letter> letters) {
  letters_.reserve(letters.size());
  for (const auto& l : letters) {
    if (l.exp != 1 && l.exp != -1) throw Error(Errc::ParseError, "letter exponent must be +-1");
    if (!letters_.empty() && letters_.back().gen == l.gen && letters_.back().exp == -l.exp)
      letters_.pop_back();
    else
      letters_.push_back(l);
  }
}

Word Word::generator(int gen, int power) {
  std::vector<Letter> ls(std::abs(power), Letter{gen, power > 0 ? 1 : -1});
  return Word(ls);
}

Word Word::inverse() const {
  Word r;
  r.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) r.letters_.push_back({it->gen, -it->exp});
  return r;
}

Word Word::power(int n) const {
  Word base = n >= 0 ? *this : inverse();
  Word r;
  for (int i = 0; i < std::abs(n); ++i) r = r * base;
  return r;
}

int Word::exponent_sum(int gen) const {
  int s = 0;
  for (const auto& l : letters_)
    if (l.gen == gen) s += l.exp;
  return s;
}

int Word::max_generator() const {
  int m = -1;
  for (const auto& l : letters_) m = std::max(m, l.gen);
  return m;
}

Word operator*(const Word& a, const Word& b) {
  std::vector<Letter> ls = a.letters_;
  ls.insert(ls.end(), b.letters_.begin(), b.letters_.end());
  return Word(ls);
}

Word commutator(const Word& a, const Word& b) { return a * b * a.inverse() * b.inverse(); }

namespace {

int find_generator(std::string_view name, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

}  // namespace

Word parse_word(std::string_view text, const std::vector<std::string>& names,
                const std::map<std::string, Word, std::less<>>& aliases) {
  std::vector<Letter> letters;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token == "1") continue;
    std::string_view base = token;
    int power = 1;
    if (auto caret = token.find('^'); caret != std::string::npos) {
      base = std::string_view(token).substr(0, caret);
      const char* first = token.data() + caret + 1;
      const char* last = token.data() + token.size();
      if (*first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, power);
      if (ec != std::errc{} || ptr != last) throw Error(Errc::ParseError, "bad exponent in '" + token + "'");
    }
    if (int g = find_generator(base, names); g >= 0) {
      for (int k = 0; k < std::abs(power); ++k) letters.push_back({g, power > 0 ? 1 : -1});
      continue;
    }
    if (auto it = aliases.find(base); it != aliases.end()) {
      const Word w = it->second.power(power);
      letters.insert(letters.end(), w.letters().begin(), w.letters().end());
      continue;
    }
    // Letter run: each character a single-letter generator, uppercase inverse.
    std::vector<Letter> run;
    for (char ch : base) {
      const bool inv = std::isupper(static_cast<unsigned char>(ch)) != 0;
      const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      const int g = find_generator(std::string_view(&lower, 1), names);
      if (g < 0) throw Error(Errc::ParseError, "unknown generator in '" + token + "'");
      run.push_back({g, inv ? -1 : 1});
    }
    const Word w = Word(run).power(power);
    letters.insert(letters.end(), w.letters().begin(), w.letters().end());
  }
  return Word(letters);
}

std::string format_word(const Word& w, const std::vector<std::string>& names) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& l : w.letters()) {
    if (!out.empty()) out += ' ';
    out += names.at(l.gen);
    if (l.exp < 0) out += "^-1";
  }
  return out;
}

void GroupPresentation::validate() const {
  auto check = [this](const Word& w, const std::string& what) {
    if (w.max_generator() >= generator_count())
      throw Error(Errc::DimensionMismatch, what + " uses an undeclared generator");
  };
  if (generators.empty()) throw Error(Errc::DimensionMismatch, "presentation without generators");
  if (!relator_names.empty() && relator_names.size() != relators.size())
    throw Error(Errc::DimensionMismatch, "relator names and relators differ in count");
  for (std::size_t i = 0; i < relators.size(); ++i) check(relators[i], "relator " + std::to_string(i));
  if (peripheral) {
    check(peripheral->longitude, "longitude");
    check(peripheral->meridian, "meridian");
  }
}

Word Endomorphism::apply(const Word& w) const {
  Word r;
  for (const auto& l : w.letters()) {
    if (l.gen >= static_cast<int>(images.size()))
      throw Error(Errc::DimensionMismatch, "endomorphism has no image for generator");
    r = r * (l.exp > 0 ? images[l.gen] : images[l.gen].inverse());
  }
  return r;
}

GroupRingElement::GroupRingElement(const Word& w, std::int64_t c) { add(w, c); }

std::int64_t GroupRingElement::augmentation() const {
  std::int64_t s = 0;
  for (const auto& [w, c] : terms_) s += c;
  return s;
}

void GroupRingElement::add(const Word& w, std::int64_t c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

GroupRingElement GroupRingElement::bar() const {
  GroupRingElement r;
  for (const auto& [w, c] : terms_) r.add(w.inverse(), c);
  return r;
}

GroupRingElement GroupRingElement::substituted(const Endomorphism& phi) const {
  GroupRingElement r;
  for (const auto& [w, c] : terms_) r.add(phi.apply(w), c);
  return r;
}

GroupRingElement& GroupRingElement::operator+=(const GroupRingElement& o) {
  for (const auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

GroupRingElement& GroupRingElement::operator-=(const GroupRingElement& o) {
  for (const auto& [w, c] : o.terms_) add(w, -c);
  return *this;
}

GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
  GroupRingElement r;
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) r.add(wa * wb, ca * cb);
  return r;
}

GroupRingElement operator*(std::int64_t c, GroupRingElement a) {
  if (c == 0) return {};
  for (auto& [w, x] : a.terms_) x *= c;
  return a;
}

std::string format_group_ring(const GroupRingElement& g, const std::vector<std::string>& names) {
  if (g.is_zero()) return "0";
  std::string out;
  for (const auto& [w, c] : g.terms()) {
    if (out.empty()) {
      if (c < 0) out += "- ";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    const std::int64_t mag = std::abs(c);
    if (mag != 1) out += std::to_string(mag) + "*";
    out += "[" + (w.empty() ? std::string() : format_word(w, names)) + "]";
  }
  return out;
}

GroupRingElement fox_derivative(const Word& w, int gen) {
  // d(uv) = du + u dv; d(x) = 1; d(x^-1) = -x^-1.
  GroupRingElement r;
  std::vector<Letter> prefix;
  for (const auto& l : w.letters()) {
    if (l.gen == gen) {
      if (l.exp > 0) {
        r.add(Word(prefix), 1);
      } else {
        auto with = prefix;
        with.push_back(l);
        r.add(Word(with), -1);
      }
    }
    prefix.push_back(l);
  }
  return r;
}

GroupRingMatrix multiply(const GroupRingMatrix& a, const GroupRingMatrix& b) {
  if (a.empty()) return {};
  const std::size_t inner = b.size();
  const std::size_t cols = inner == 0 ? 0 : b[0].size();
  GroupRingMatrix r(a.size(), std::vector<GroupRingElement>(cols));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != inner) throw Error(Errc::DimensionMismatch, "group ring matrix product shape mismatch");
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < cols; ++j) r[i][j] += a[i][k] * b[k][j];
    }
  }
  return r;
}

bool is_zero(const GroupRingMatrix& m) {
  for (const auto& row : m)
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

GroupRingMatrix fox_matrix(const GroupPresentation& p) {
  GroupRingMatrix m(p.relator_count(), std::vector<GroupRingElement>(p.generator_count()));
  for (int i = 0; i < p.relator_count(); ++i)
    for (int j = 0; j < p.generator_count(); ++j) m[i][j] = fox_derivative(p.relators[i], j);
  return m;
}

SmithForm smith_normal_form(const IntMatrix& input) {
  IntMatrix a = input;
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  SmithForm s;
  s.u = IntMatrix::Identity(m, m);
  s.v = IntMatrix::Identity(n, n);

  auto swap_rows = [&](int i, int j) {
    if (i == j) return;
    a.row(i).swap(a.row(j));
    s.u.row(i).swap(s.u.row(j));
  };
  auto swap_cols = [&](int i, int j) {
    if (i == j) return;
    a.col(i).swap(a.col(j));
    s.v.col(i).swap(s.v.col(j));
  };

  for (int t = 0; t < std::min(m, n); ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    int pi = -1, pj = -1;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j)
        if (a(i, j) != 0 && (pi < 0 || std::abs(a(i, j)) < std::abs(a(pi, pj)))) pi = i, pj = j;
    if (pi < 0) break;
    swap_rows(t, pi);
    swap_cols(t, pj);

    for (;;) {
      bool clean = true;
      for (int i = t + 1; i < m; ++i) {
        const std::int64_t q = a(i, t) / a(t, t);
        if (q != 0) {
          a.row(i) -= q * a.row(t);
          s.u.row(i) -= q * s.u.row(t);
        }
        if (a(i, t) != 0) {
          swap_rows(t, i);
          clean = false;
        }
      }
      for (int j = t + 1; j < n; ++j) {
        const std::int64_t q = a(t, j) / a(t, t);
        if (q != 0) {
          a.col(j) -= q * a.col(t);
          s.v.col(j) -= q * s.v.col(t);
        }
        if (a(t, j) != 0) {
          swap_cols(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // Divisibility: fold an offending row into the pivot row.
      int bad = -1;
      for (int i = t + 1; i < m && bad < 0; ++i)
        for (int j = t + 1; j < n; ++j)
          if (a(i, j) % a(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      a.row(t) += a.row(bad);
      s.u.row(t) += s.u.row(bad);
    }
    if (a(t, t) < 0) {
      a.row(t) *= -1;
      s.u.row(t) *= -1;
    }
    s.diagonal.push_back(a(t, t));
  }
  return s;
}

IntMatrix exponent_matrix(const GroupPresentation& p) {
  IntMatrix m(p.relator_count(), p.generator_count());
  for (int i = 0; i < p.relator_count(); ++i)
    for (int j = 0; j < p.generator_count(); ++j) m(i, j) = p.relators[i].exponent_sum(j);
  return m;
}

int Abelianization::operator()(const Word& w) const {
  int s = 0;
  for (const auto& l : w.letters()) s += l.exp * exponents.at(l.gen);
  return s;
}

Abelianization abelianize(const GroupPresentation& p) {
  const IntMatrix e = exponent_matrix(p);
  const SmithForm snf = smith_normal_form(e);
  const int n = p.generator_count();
  if (n - snf.rank() != 1)
    throw Error(Errc::FreeRankNotOne, "H_1 has free rank " + std::to_string(n - snf.rank()));
  Abelianization ab;
  // In the coordinates x V the relations are spanned by d_i e_i, so the last
  // coordinate is the free quotient.
  ab.exponents.resize(n);
  for (int j = 0; j < n; ++j) ab.exponents[j] = static_cast<int>(snf.v(j, n - 1));
  for (auto d : snf.diagonal)
    if (d > 1) ab.torsion.push_back(d);
  if (p.peripheral) {
    const int a = ab(p.peripheral->meridian);
    if (a != 1 && a != -1)
      throw Error(Errc::MeridianNotGenerator, "meridian maps to " + std::to_string(a) + " in the free part of H_1");
    if (a < 0)
      for (auto& x : ab.exponents) x = -x;
  }
  return ab;
}

IntegerHomology integer_homology(const std::vector<int>& dims, const std::vector<IntMatrix>& boundaries) {
  const std::size_t top = dims.size();
  if (boundaries.size() + 1 != top) throw Error(Errc::DimensionMismatch, "need one boundary per adjacent degree pair");
  std::vector<SmithForm> forms;
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    if (boundaries[i].rows() != dims[i] || boundaries[i].cols() != dims[i + 1])
      throw Error(Errc::DimensionMismatch, "boundary matrix shape disagrees with cell counts");
    forms.push_back(smith_normal_form(boundaries[i]));
  }
  IntegerHomology h;
  for (std::size_t k = 0; k < top; ++k) {
    const int out = k > 0 ? forms[k - 1].rank() : 0;
    const int in = k < forms.size() ? forms[k].rank() : 0;
    h.betti.push_back(dims[k] - out - in);
    std::vector<std::int64_t> tors;
    if (k < forms.size())
      for (auto d : forms[k].diagonal)
        if (d > 1) tors.push_back(d);
    h.torsion.push_back(std::move(tors));
  }
  return h;
}

LaurentMatrix evaluate_twisted(const GroupRingElement& g, std::span<const Eigen::MatrixXcd> rho,
                               const Abelianization& alpha) {
  const int n = static_cast<int>(rho[0].rows());
  std::vector<Eigen::MatrixXcd> inv;
  inv.reserve(rho.size());
  for (const auto& m : rho) inv.push_back(m.inverse());
  // Group terms by t-exponent before converting to polynomials.
  std::map<int, Eigen::MatrixXcd> by_exp;
  for (const auto& [w, c] : g.terms()) {
    auto [it, _] = by_exp.try_emplace(alpha(w), Eigen::MatrixXcd::Zero(n, n));
    it->second += static_cast<double>(c) * evaluate_word<Eigen::MatrixXcd>(w, rho, inv);
  }
  LaurentMatrix r(n, n);
  for (const auto& [e, m] : by_exp) r += LaurentMatrix::from_complex(m, e);
  return r;
}

}  // namespace rtorsion
