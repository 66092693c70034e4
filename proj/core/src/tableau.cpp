#include "tdrk/tableau.hpp"

#include <algorithm>
#include <sstream>

#include "tdrk/errors.hpp"

namespace tdrk {

namespace {

Rational abs_r(const Rational& r) { return r < 0 ? Rational(-r) : r; }

void check_square(const RationalMatrix& m, std::size_t s, const char* name) {
  if (m.size() != s) throw ConfigError(std::string(name) + " must have " + std::to_string(s) + " rows");
  for (std::size_t i = 0; i < s; ++i) {
    if (m[i].size() != s) {
      throw ConfigError(std::string(name) + " row " + std::to_string(i) + " must have " +
                        std::to_string(s) + " entries");
    }
    for (std::size_t j = i; j < s; ++j) {
      if (m[i][j] != 0) {
        throw ConfigError(std::string(name) + " must be strictly lower triangular (entry " +
                          std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

void write_row(std::ostringstream& out, const RationalVector& row) {
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j > 0) out << ' ';
    out << format_rational(row[j]);
  }
  out << '\n';
}

using Poly = RationalVector;

Poly poly_add(const Poly& p, const Poly& q) {
  Poly r(std::max(p.size(), q.size()), Rational(0));
  for (std::size_t k = 0; k < p.size(); ++k) r[k] += p[k];
  for (std::size_t k = 0; k < q.size(); ++k) r[k] += q[k];
  return r;
}

// (alpha z + beta z^2) * p
Poly poly_shift_scale(const Poly& p, const Rational& alpha, const Rational& beta) {
  Poly r(p.size() + 2, Rational(0));
  for (std::size_t k = 0; k < p.size(); ++k) {
    r[k + 1] += alpha * p[k];
    r[k + 2] += beta * p[k];
  }
  return r;
}

}  // namespace

TdrkTableau::TdrkTableau(RationalMatrix a, RationalMatrix adot, RationalVector b, RationalVector bdot)
    : a_(std::move(a)), adot_(std::move(adot)), b_(std::move(b)), bdot_(std::move(bdot)) {
  const std::size_t s = b_.size();
  if (s == 0) throw ConfigError("tableau needs at least one stage");
  if (bdot_.size() != s) throw ConfigError("bdot must have " + std::to_string(s) + " entries");
  check_square(a_, s, "A");
  check_square(adot_, s, "Adot");
  c_.assign(s, Rational(0));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) c_[i] += a_[i][j];
  }
}

std::string TdrkTableau::to_text() const {
  std::ostringstream out;
  out << stages() << '\n';
  for (const auto& row : a_) write_row(out, row);
  out << '\n';
  for (const auto& row : adot_) write_row(out, row);
  out << '\n';
  write_row(out, b_);
  write_row(out, bdot_);
  return out.str();
}

TdrkTableau TdrkTableau::parse(std::string_view text) {
  std::vector<std::string> tokens;
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string w;
    while (words >> w) tokens.push_back(w);
  }
  if (tokens.empty()) throw ConfigError("empty tableau text");
  std::size_t s = 0;
  try {
    const long long parsed = std::stoll(tokens[0]);
    if (parsed <= 0 || parsed > 64) throw ConfigError("stage count out of range");
    s = static_cast<std::size_t>(parsed);
  } catch (const std::logic_error&) {
    throw ConfigError("tableau text must start with the stage count");
  }
  const std::size_t expected = 1 + 2 * s * s + 2 * s;
  if (tokens.size() != expected) {
    throw ConfigError("tableau with " + std::to_string(s) + " stages needs " +
                      std::to_string(expected - 1) + " coefficients, got " +
                      std::to_string(tokens.size() - 1));
  }
  std::size_t pos = 1;
  auto read_matrix = [&]() {
    RationalMatrix m(s, RationalVector(s));
    for (auto& row : m) {
      for (auto& v : row) v = parse_rational(tokens[pos++]);
    }
    return m;
  };
  auto read_vector = [&]() {
    RationalVector v(s);
    for (auto& x : v) x = parse_rational(tokens[pos++]);
    return v;
  };
  RationalMatrix a = read_matrix();
  RationalMatrix adot = read_matrix();
  RationalVector b = read_vector();
  RationalVector bdot = read_vector();
  return {std::move(a), std::move(adot), std::move(b), std::move(bdot)};
}

ConditionReport check_order_conditions(const TdrkTableau& t) {
  const std::size_t s = t.stages();
  const auto& a = t.a();
  const auto& adot = t.adot();
  const auto& b = t.b();
  const auto& bdot = t.bdot();
  const auto& c = t.c();

  Rational be = 0, bc = 0, bdote = 0, bac = 0, badote = 0, bdotc = 0, bc2 = 0;
  Rational abs_bdot_e = 0, abs_b_abs_adot_e = 0, abs_bdot_abs_c = 0;
  for (std::size_t i = 0; i < s; ++i) {
    be += b[i];
    bc += b[i] * c[i];
    bdote += bdot[i];
    bdotc += bdot[i] * c[i];
    bc2 += b[i] * c[i] * c[i];
    abs_bdot_e += abs_r(bdot[i]);
    abs_bdot_abs_c += abs_r(bdot[i]) * abs_r(c[i]);
    Rational ac = 0, adote = 0, abs_adote = 0;
    for (std::size_t j = 0; j < s; ++j) {
      ac += a[i][j] * c[j];
      adote += adot[i][j];
      abs_adote += abs_r(adot[i][j]);
    }
    bac += b[i] * ac;
    badote += b[i] * adote;
    abs_b_abs_adot_e += abs_r(b[i]) * abs_adote;
  }

  ConditionReport report;
  report.order_residuals = {
      {"b.e = 1", 1, be - 1},
      {"b.c + bdot.e = 1/2", 2, bc + bdote - Rational(1, 2)},
      {"b.A.c + b.Adot.e + bdot.c = 1/6", 3, bac + badote + bdotc - Rational(1, 6)},
      {"b.c^2 + 2 bdot.c = 1/3", 3, bc2 + 2 * bdotc - Rational(1, 3)},
  };
  report.perturbation_residuals = {
      {"|bdot| e = 0", 2, abs_bdot_e},
      {"|b| |Adot| e = 0", 3, abs_b_abs_adot_e},
      {"|bdot| |c| = 0", 3, abs_bdot_abs_c},
  };
  int satisfied = 3;
  for (const auto& r : report.order_residuals) {
    if (r.residual != 0) satisfied = std::min(satisfied, r.order - 1);
  }
  report.satisfied_order = satisfied;
  report.higher_orders_unverified = satisfied == 3;
  report.perturbation_order = check_perturbation_order(t);
  return report;
}

int check_perturbation_order(const TdrkTableau& t) {
  for (const auto& v : t.bdot()) {
    if (v != 0) return 1;
  }
  Rational weight = 0;
  for (std::size_t i = 0; i < t.stages(); ++i) {
    Rational row = 0;
    for (const auto& v : t.adot()[i]) row += abs_r(v);
    weight += abs_r(t.b()[i]) * row;
  }
  return weight != 0 ? 2 : 3;
}

RationalVector stability_polynomial(const TdrkTableau& t) {
  const std::size_t s = t.stages();
  // Stage amplification polynomials by forward substitution.
  std::vector<Poly> stage(s);
  for (std::size_t i = 0; i < s; ++i) {
    Poly y{Rational(1)};
    for (std::size_t j = 0; j < i; ++j) {
      if (t.a()[i][j] == 0 && t.adot()[i][j] == 0) continue;
      y = poly_add(y, poly_shift_scale(stage[j], t.a()[i][j], t.adot()[i][j]));
    }
    stage[i] = std::move(y);
  }
  Poly r{Rational(1)};
  for (std::size_t j = 0; j < s; ++j) {
    if (t.b()[j] == 0 && t.bdot()[j] == 0) continue;
    r = poly_add(r, poly_shift_scale(stage[j], t.b()[j], t.bdot()[j]));
  }
  while (r.size() > 1 && r.back() == 0) r.pop_back();
  return r;
}

}  // namespace tdrk
