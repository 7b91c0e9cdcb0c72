#include "rtorsion/cwmodel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/LU>

#include "rtorsion/repspace.hpp"

namespace rtorsion {

namespace {

struct Entry {
  int line = 0;
  std::string key;
  std::string value;
};

struct Section {
  std::string name;
  std::vector<Entry> entries;

  const Entry* find(std::string_view key) const {
    for (const auto& e : entries)
      if (e.key == key) return &e;
    return nullptr;
  }
};

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(number, "unterminated section header");
      const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      for (const auto& s : sections)
        if (s.name == name) fail(number, "duplicate section [" + name + "]");
      sections.push_back({name, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(number, "expected 'key = value'");
    if (sections.empty()) fail(number, "entry outside of a section");
    Entry e{number, trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1))};
    if (e.key.empty()) fail(number, "empty key");
    if (sections.back().find(e.key)) fail(number, "duplicate key '" + e.key + "'");
    sections.back().entries.push_back(std::move(e));
  }
  return sections;
}

const Section& require_section(const std::vector<Section>& sections, std::string_view name) {
  for (const auto& s : sections)
    if (s.name == name) return s;
  throw Error(Errc::ParseError, "missing section [" + std::string(name) + "]");
}

const Entry& require(const Section& s, std::string_view key) {
  if (const Entry* e = s.find(key)) return *e;
  throw Error(Errc::ParseError, "section [" + s.name + "] lacks '" + std::string(key) + "'");
}

int parse_int(const Entry& e) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(e.value, &used);
    if (used != e.value.size()) fail(e.line, "trailing characters after integer");
    return v;
  } catch (const std::logic_error&) {
    fail(e.line, "expected an integer for '" + e.key + "'");
  }
}

std::vector<int> parse_ints(const Entry& e) {
  std::vector<int> out;
  std::istringstream in(e.value);
  std::string tok;
  while (in >> tok) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::logic_error&) {
      fail(e.line, "expected integers for '" + e.key + "'");
    }
  }
  return out;
}

using Aliases = std::map<std::string, Word, std::less<>>;

Word word_at(const Entry& e, std::string_view text, const std::vector<std::string>& names, const Aliases& aliases) {
  try {
    return parse_word(text, names, aliases);
  } catch (const Error& err) {
    fail(e.line, err.what());
  }
}

// entry := '0' | [sign] term { sign term };  term := [INT '*'] '[' word ']'
GroupRingElement parse_entry(const Entry& e, std::string_view text, const std::vector<std::string>& names,
                             const Aliases& aliases) {
  const std::string s = trim(text);
  if (s == "0") return {};
  GroupRingElement out;
  std::size_t i = 0;
  bool first = true;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  while (true) {
    skip();
    if (i >= s.size()) break;
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
      skip();
    } else if (!first) {
      fail(e.line, "expected '+' or '-' between terms");
    }
    std::int64_t coeff = 1;
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      coeff = std::stoll(s.substr(i, j - i));
      i = j;
      skip();
      if (i >= s.size() || s[i] != '*') fail(e.line, "expected '*' after coefficient");
      ++i;
      skip();
    }
    if (i >= s.size() || s[i] != '[') fail(e.line, "expected '[' starting a group element");
    const auto close = s.find(']', i);
    if (close == std::string::npos) fail(e.line, "unterminated '['");
    out.add(word_at(e, std::string_view(s).substr(i + 1, close - i - 1), names, aliases), sign * coeff);
    i = close + 1;
    first = false;
  }
  if (first) fail(e.line, "empty group ring entry");
  return out;
}

std::vector<GroupRingElement> parse_row(const Entry& e, std::size_t columns, const std::vector<std::string>& names,
                                        const Aliases& aliases) {
  std::vector<GroupRingElement> row;
  std::size_t start = 0;
  while (true) {
    const auto bar = e.value.find('|', start);
    row.push_back(parse_entry(e, std::string_view(e.value).substr(start, bar - start), names, aliases));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  if (row.size() != columns)
    fail(e.line, "row '" + e.key + "' has " + std::to_string(row.size()) + " entries, expected " +
                     std::to_string(columns));
  return row;
}

std::vector<IdentityFactor> parse_factors(const Entry& e, const GroupPresentation& p) {
  std::vector<IdentityFactor> out;
  std::istringstream in(e.value);
  std::string item;
  while (std::getline(in, item, ';')) {
    const std::string s = trim(item);
    if (s.empty()) continue;
    IdentityFactor f;
    if (s[0] != '+' && s[0] != '-') fail(e.line, "factor must start with '+' or '-'");
    f.sign = s[0] == '-' ? -1 : 1;
    const auto open = s.find('['), close = s.find(']');
    if (open == std::string::npos || close == std::string::npos || close < open)
      fail(e.line, "factor needs a bracketed conjugator");
    f.conjugator = word_at(e, std::string_view(s).substr(open + 1, close - open - 1), p.generators, {});
    const std::string rel = trim(std::string_view(s).substr(close + 1));
    auto it = std::find(p.relator_names.begin(), p.relator_names.end(), rel);
    if (it == p.relator_names.end()) fail(e.line, "unknown relator '" + rel + "'");
    f.relator = static_cast<int>(it - p.relator_names.begin());
    out.push_back(f);
  }
  return out;
}

}  // namespace

CWPairModel parse_model_text(std::string_view text) {
  const auto sections = split_sections(text);
  CWPairModel m;

  const Section& pres = require_section(sections, "presentation");
  if (const Entry* e = pres.find("name")) m.name = e->value;
  {
    std::istringstream in(require(pres, "generators").value);
    std::string g;
    while (in >> g) {
      if (std::find(m.presentation.generators.begin(), m.presentation.generators.end(), g) !=
          m.presentation.generators.end())
        fail(require(pres, "generators").line, "duplicate generator '" + g + "'");
      m.presentation.generators.push_back(g);
    }
  }
  auto& gens = m.presentation.generators;
  if (gens.empty()) fail(require(pres, "generators").line, "no generators");
  for (const auto& e : pres.entries) {
    if (e.key.rfind("relators.", 0) != 0) continue;
    m.presentation.relator_names.push_back(e.key.substr(9));
    m.presentation.relators.push_back(word_at(e, e.value, gens, {}));
  }
  const Entry& lon = require(pres, "longitude");
  const Entry& mer = require(pres, "meridian");
  m.presentation.peripheral = Peripheral{word_at(lon, lon.value, gens, {}), word_at(mer, mer.value, gens, {})};
  if (const Entry* e = pres.find("ambient")) {
    if (e->value == "S3")
      m.ambient = Ambient::S3;
    else if (e->value == "ZHS")
      m.ambient = Ambient::IntegralHomologySphere;
    else if (e->value == "QHS")
      m.ambient = Ambient::RationalHomologySphere;
    else
      fail(e->line, "ambient must be S3, ZHS or QHS");
  }
  if (const Entry* e = pres.find("torsion"))
    for (int d : parse_ints(*e)) m.declared_torsion.push_back(d);

  const int n = m.presentation.generator_count();
  const int r = m.presentation.relator_count();
  const Section& cells = require_section(sections, "cells");
  const Entry& ecells = require(cells, "E");
  if (parse_ints(ecells) != std::vector<int>{1, n, r})
    fail(ecells.line, "exterior cells must be 1 " + std::to_string(n) + " " + std::to_string(r) +
                          " for this presentation");
  const Entry& tcells = require(cells, "torus");
  if (parse_ints(tcells) != std::vector<int>{1, 2, 1}) fail(tcells.line, "torus cells must be 1 2 1");

  const Aliases aliases{{"lambda", m.longitude()}, {"mu", m.meridian()}};

  m.exterior.cells = {1, n, r};
  m.exterior.boundary.assign(2, {});
  const Section& d1 = require_section(sections, "boundary.d1");
  for (const auto& g : gens) m.exterior.boundary[0].push_back(parse_row(require(d1, g), 1, gens, {}));
  const Section& d2 = require_section(sections, "boundary.d2");
  for (const auto& name : m.presentation.relator_names)
    m.exterior.boundary[1].push_back(parse_row(require(d2, name), n, gens, {}));

  const Section& torus = require_section(sections, "torus");
  m.torus.complex.cells = {1, 2, 1};
  m.torus.complex.boundary = {
      {parse_row(require(torus, "d1.lambda"), 1, gens, aliases), parse_row(require(torus, "d1.mu"), 1, gens, aliases)},
      {parse_row(require(torus, "d2.sigma"), 2, gens, aliases)}};
  m.torus.attaching = commutator(m.longitude(), m.meridian());
  if (const Entry* e = torus.find("front_vertex")) m.torus.front_vertex = word_at(*e, e->value, gens, aliases);

  const Section& inc = require_section(sections, "inclusion");
  m.inclusion.maps = {{parse_row(require(inc, "vertex"), 1, gens, aliases)},
                      {parse_row(require(inc, "lambda"), n, gens, aliases), parse_row(require(inc, "mu"), n, gens, aliases)},
                      {parse_row(require(inc, "sigma"), r, gens, aliases)}};
  m.inclusion.factors = parse_factors(require(inc, "sigma.factors"), m.presentation);

  for (const auto& s : sections) {
    if (s.name.rfind("automorphism.", 0) != 0) continue;
    AutomorphismRecord a;
    a.name = s.name.substr(13);
    for (const auto& g : gens) {
      const Entry& e = require(s, g);
      a.map.images.push_back(word_at(e, e.value, gens, {}));
    }
    a.delta = parse_int(require(s, "delta"));
    a.mu_exponent = parse_int(require(s, "mu_exponent"));
    if (std::abs(a.delta) != 1) fail(require(s, "delta").line, "delta must be 1 or -1");
    if (std::abs(a.mu_exponent) != 1) fail(require(s, "mu_exponent").line, "mu_exponent must be 1 or -1");
    if (const Entry* e = s.find("conjugator")) a.conjugator = word_at(*e, e->value, gens, {});
    m.automorphisms.push_back(std::move(a));
  }
  try {
    m.presentation.validate();
  } catch (const Error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  return m;
}

bool ValidationReport::ok() const { return first_failure() == nullptr; }

const ValidationCheck* ValidationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

namespace {

GroupRingElement word_minus_one(const Word& w) { return GroupRingElement(w) - GroupRingElement::one(); }

// Random evaluation of a group ring matrix identity A * B == C under the
// representation x_j -> t^alpha(x_j) rho(x_j).
struct Evaluator {
  std::vector<Eigen::MatrixXcd> images, inverses;

  Eigen::MatrixXcd operator()(const GroupRingElement& g) const {
    return evaluate<Eigen::MatrixXcd>(g, images, inverses);
  }
  Eigen::MatrixXcd operator()(const GroupRingMatrix& m) const {
    const int rows = static_cast<int>(m.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * rows, 2 * cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) out.block(2 * i, 2 * j, 2, 2) = (*this)(m[i][j]);
    return out;
  }
};

double scale_of(const GroupRingMatrix& m) {
  double s = 1.0;
  for (const auto& row : m)
    for (const auto& e : row)
      for (const auto& [w, c] : e.terms()) s += std::abs(static_cast<double>(c));
  return s;
}

std::vector<std::vector<SU2Element>> irreducible_samples(const GroupPresentation& p, std::uint64_t seed) {
  std::vector<std::vector<SU2Element>> found;
  if (p.generator_count() < 2) return found;
  try {
    RepSpace space(p);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.05, std::numbers::pi - 0.05);
    for (int attempt = 0; attempt < 40 && found.size() < 6; ++attempt) {
      try {
        const RepPoint pt = space.solve_near({u(rng), u(rng), u(rng)});
        if (check_irreducible(pt.images).irreducible) found.push_back(pt.images);
      } catch (const Error&) {
      }
    }
  } catch (const Error&) {
  }
  return found;
}

ValidationCheck symbolic(std::string name, const std::string& failing_cell) {
  ValidationCheck c{std::move(name), failing_cell.empty(), 0.0, failing_cell, Errc::ChainMapViolation};
  return c;
}

}  // namespace

ValidationReport validate_model(const CWPairModel& m, int evaluations, std::uint64_t seed) {
  ValidationReport report;
  const auto& p = m.presentation;
  const auto& names = p.generators;
  const auto& dE = m.exterior.boundary;
  const auto& dT = m.torus.complex.boundary;
  const auto& inc = m.inclusion.maps;

  // Symbolic tier. The free group ring products are exact, and each row of
  // d2 * d1 must equal (attaching word - 1), which is zero in the knot group.
  {
    std::string bad;
    for (int j = 0; j < p.generator_count() && bad.empty(); ++j)
      if (dE[0][j][0] != word_minus_one(Word::generator(j))) bad = "1-cell " + names[j] + " has wrong boundary";
    const auto prod = multiply(dE[1], dE[0]);
    for (int i = 0; i < p.relator_count() && bad.empty(); ++i)
      if (prod[i][0] != word_minus_one(p.relators[i]))
        bad = "2-cell " + p.relator_names[i] + ": Fox identity fails for its boundary row";
    report.checks.push_back(symbolic("exterior d^2 = 0 (symbolic)", bad));
  }
  {
    std::string bad;
    for (int i = 0; i < p.relator_count() && bad.empty(); ++i)
      for (int j = 0; j < p.generator_count(); ++j)
        if (dE[1][i][j] != fox_derivative(p.relators[i], j)) {
          bad = "2-cell " + p.relator_names[i] + ", column " + names[j] + ": entry differs from the Fox derivative";
          break;
        }
    report.checks.push_back(symbolic("exterior boundary is the Fox matrix", bad));
  }
  {
    std::string bad;
    if (dT[0][0][0] != word_minus_one(m.longitude())) bad = "torus 1-cell lambda has wrong boundary";
    if (bad.empty() && dT[0][1][0] != word_minus_one(m.meridian())) bad = "torus 1-cell mu has wrong boundary";
    if (bad.empty() && multiply(dT[1], dT[0])[0][0] != word_minus_one(m.torus.attaching))
      bad = "torus 2-cell sigma: boundary does not close up along [lambda, mu]";
    report.checks.push_back(symbolic("torus d^2 = 0 (symbolic)", bad));
  }
  {
    std::string bad;
    if (inc[0][0][0] != GroupRingElement::one()) bad = "vertex must map to the base vertex";
    const Word* words[2] = {&m.longitude(), &m.meridian()};
    const char* labels[2] = {"lambda", "mu"};
    for (int k = 0; k < 2 && bad.empty(); ++k)
      for (int j = 0; j < p.generator_count(); ++j)
        if (inc[1][k][j] != fox_derivative(*words[k], j)) {
          bad = std::string("torus 1-cell ") + labels[k] + " does not map to the chain of its word";
          break;
        }
    report.checks.push_back(symbolic("inclusion of peripheral 1-cells", bad));
  }
  {
    std::string bad;
    Word product;
    std::vector<GroupRingElement> collected(p.relator_count());
    for (const auto& f : m.inclusion.factors) {
      product = product * f.conjugator * p.relators[f.relator].power(f.sign) * f.conjugator.inverse();
      collected[f.relator] += f.sign * GroupRingElement(f.conjugator);
    }
    if (product != m.torus.attaching)
      bad = "torus 2-cell sigma: product of relator conjugates is " + format_word(product, names) +
            ", not [lambda, mu]";
    for (int i = 0; i < p.relator_count() && bad.empty(); ++i)
      if (collected[i] != inc[2][0][i])
        bad = "torus 2-cell sigma: chain coefficient on " + p.relator_names[i] + " disagrees with its factors";
    report.checks.push_back(symbolic("identity among relators for sigma", bad));
  }

  // Numerical tier.
  std::optional<Abelianization> alpha;
  try {
    alpha = abelianize(p);
  } catch (const Error&) {
  }
  const auto irreducible = irreducible_samples(p, seed);
  const auto reps = sample_representations(p, irreducible, evaluations, seed + 1);
  std::mt19937_64 rng(seed + 2);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  double dd_e = 0.0, dd_t = 0.0, chain1 = 0.0, chain2 = 0.0, peripheral = 0.0;
  const double se = scale_of(dE[1]) * scale_of(dE[0]);
  const double st = scale_of(dT[1]) * scale_of(dT[0]);
  for (const auto& rep : reps) {
    Evaluator ev;
    const std::complex<double> t = std::polar(1.0, phase(rng));
    for (int j = 0; j < p.generator_count(); ++j) {
      const std::complex<double> tj = alpha ? std::pow(t, alpha->exponents[j]) : 1.0;
      ev.images.push_back(tj * rep[j].matrix());
      ev.inverses.push_back(rep[j].inverse().matrix() / tj);
    }
    dd_e = std::max(dd_e, (ev(dE[1]) * ev(dE[0])).cwiseAbs().maxCoeff() / se);
    dd_t = std::max(dd_t, (ev(dT[1]) * ev(dT[0])).cwiseAbs().maxCoeff() / st);
    chain1 = std::max(chain1, (ev(inc[1]) * ev(dE[0]) - ev(dT[0]) * ev(inc[0])).cwiseAbs().maxCoeff() /
                                  (scale_of(inc[1]) * scale_of(dE[0])));
    chain2 = std::max(chain2, (ev(inc[2]) * ev(dE[1]) - ev(dT[1]) * ev(inc[1])).cwiseAbs().maxCoeff() /
                                  (scale_of(inc[2]) * scale_of(dE[1])));
    const Eigen::MatrixXcd lm = ev(GroupRingElement(m.longitude())) * ev(GroupRingElement(m.meridian()));
    const Eigen::MatrixXcd ml = ev(GroupRingElement(m.meridian())) * ev(GroupRingElement(m.longitude()));
    peripheral = std::max(peripheral, (lm - ml).cwiseAbs().maxCoeff());
  }
  report.evaluations = static_cast<int>(reps.size());
  const double tol = 1e-10;
  auto numeric = [&](std::string name, double res, std::string cell) {
    report.checks.push_back({std::move(name), res <= tol, res, res <= tol ? std::string() : std::move(cell),
                             Errc::ChainMapViolation});
  };
  numeric("exterior d^2 = 0 (" + std::to_string(reps.size()) + " evaluations)", dd_e, "exterior 2-cells");
  numeric("torus d^2 = 0 (" + std::to_string(reps.size()) + " evaluations)", dd_t, "torus 2-cell sigma");
  numeric("inclusion is a chain map in degree 1", chain1, "torus 1-cells");
  numeric("inclusion is a chain map in degree 2", chain2, "torus 2-cell sigma");
  numeric("longitude commutes with meridian", peripheral, "peripheral words");

  // Untwisted homology.
  const auto he = untwisted_homology(m, ModelPart::Exterior);
  const bool ranks_e = he.betti == std::vector<int>{1, 1, 0};
  std::vector<std::int64_t> tors = he.torsion[1];
  std::vector<std::int64_t> declared = m.declared_torsion;
  std::sort(tors.begin(), tors.end());
  std::sort(declared.begin(), declared.end());
  const bool tors_ok = tors == declared && (m.ambient == Ambient::RationalHomologySphere || tors.empty());
  {
    std::ostringstream detail;
    if (!ranks_e)
      detail << "exterior ranks (" << he.betti[0] << ", " << he.betti[1] << ", " << he.betti[2]
             << "), expected (1, 1, 0)";
    else if (!tors_ok)
      detail << "degree 1 torsion does not match the declared torsion";
    report.checks.push_back({"exterior homology ranks (1,1,0)", ranks_e && tors_ok, 0.0, detail.str(),
                             Errc::HomologyMismatch});
  }
  const auto ht = untwisted_homology(m, ModelPart::Boundary);
  const bool ranks_t = ht.betti == std::vector<int>{1, 2, 1};
  report.checks.push_back({"torus homology ranks (1,2,1)", ranks_t, 0.0,
                           ranks_t ? "" : "torus ranks differ from (1, 2, 1)", Errc::HomologyMismatch});
  return report;
}

IntegerHomology untwisted_homology(const CWPairModel& m, ModelPart part) {
  const EquivariantComplex& c = part == ModelPart::Exterior ? m.exterior : m.torus.complex;
  std::vector<IntMatrix> boundaries;
  for (int d = 1; d <= c.top(); ++d) {
    IntMatrix b = IntMatrix::Zero(c.cells[d - 1], c.cells[d]);
    for (int e = 0; e < c.cells[d]; ++e)
      for (int f = 0; f < c.cells[d - 1]; ++f) b(f, e) = c.boundary[d - 1][e][f].augmentation();
    boundaries.push_back(std::move(b));
  }
  return integer_homology(c.cells, boundaries);
}

CWPairModel load_validated(std::string_view text) {
  CWPairModel m = parse_model_text(text);
  const ValidationReport report = validate_model(m);
  if (const ValidationCheck* bad = report.first_failure())
    throw Error(bad->failure, bad->name + ": " + bad->detail);
  return m;
}

CWPairModel parse_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_validated(buf.str());
}

const CWPairModel& figure_eight_model() {
  static const CWPairModel model = load_validated(figure_eight_model_text());
  return model;
}

}  // namespace rtorsion
