#include "qkt/series.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "qkt/errors.hpp"

namespace qkt {

VarGroup VariableSet::group(int var) const {
  if (var < t_count) return VarGroup::t;
  if (var < t_count + novikov_count) return VarGroup::novikov;
  return VarGroup::q;
}

std::string VariableSet::name(int var) const {
  if (var < 0 || var >= size()) throw UnknownVariable("variable index " + std::to_string(var));
  if (var < t_count) return "t" + std::to_string(var);
  if (var < t_count + novikov_count) return "Q" + std::to_string(var - t_count);
  return "q";
}

int VariableSet::index_of(std::string_view name) const {
  auto numbered = [&](char prefix, int count, int offset) -> int {
    if (name.size() < 2 || name[0] != prefix) return -1;
    int idx = 0;
    for (char c : name.substr(1)) {
      if (c < '0' || c > '9') return -1;
      idx = idx * 10 + (c - '0');
      if (idx > kMaxVariables) return -1;
    }
    if (name.size() > 2 && name[1] == '0') return -1;
    return idx < count ? offset + idx : -1;
  };
  if (name == "q" && has_q) return t_count + novikov_count;
  if (int i = numbered('t', t_count, 0); i >= 0) return i;
  if (int i = numbered('Q', novikov_count, t_count); i >= 0) return i;
  throw UnknownVariable("'" + std::string(name) + "'");
}

int Truncation::of(VarGroup g) const {
  switch (g) {
    case VarGroup::t: return t;
    case VarGroup::novikov: return novikov;
    case VarGroup::q: return q;
  }
  return 0;
}

int& Truncation::of(VarGroup g) {
  switch (g) {
    case VarGroup::t: return t;
    case VarGroup::novikov: return novikov;
    case VarGroup::q: return q;
  }
  return t;
}

Truncation Truncation::min(const Truncation& a, const Truncation& b) {
  return {std::min(a.t, b.t), std::min(a.novikov, b.novikov), std::min(a.q, b.q)};
}

Monomial Monomial::from_exponents(std::span<const int> exps) {
  if (exps.size() > static_cast<std::size_t>(kMaxVariables)) {
    throw IncompatibleSeries("more than " + std::to_string(kMaxVariables) + " variables");
  }
  Monomial m;
  for (std::size_t i = 0; i < exps.size(); ++i) m.set_exponent(static_cast<int>(i), exps[i]);
  return m;
}

void Monomial::set_exponent(int var, int e) {
  if (e < 0 || e > 2 * kMaxOrder) throw IncompatibleSeries("exponent out of range: " + std::to_string(e));
  auto& w = words_[var / 8];
  w &= ~(std::uint64_t{0xff} << shift(var));
  w |= std::uint64_t(e) << shift(var);
}

std::vector<int> Monomial::exponents(int count) const {
  std::vector<int> out(count);
  for (int i = 0; i < count; ++i) out[i] = exponent(i);
  return out;
}

GroupDegrees degrees(const Monomial& m, const VariableSet& vars) {
  GroupDegrees d;
  int v = 0;
  for (; v < vars.t_count; ++v) d.t += m.exponent(v);
  for (; v < vars.t_count + vars.novikov_count; ++v) d.novikov += m.exponent(v);
  if (vars.has_q) d.q = m.exponent(v);
  return d;
}

namespace {

void check_layout(const VariableSet& vars, const Truncation& trunc) {
  if (vars.t_count < 0 || vars.novikov_count < 0 || vars.size() > kMaxVariables) {
    throw IncompatibleSeries("unsupported variable layout");
  }
  for (int o : {trunc.t, trunc.novikov, trunc.q}) {
    if (o < -1 || o > kMaxOrder) throw IncompatibleSeries("truncation order out of range: " + std::to_string(o));
  }
}

}  // namespace

TruncatedSeries::TruncatedSeries(VariableSet vars, Truncation trunc) : vars_(vars), trunc_(trunc) {
  check_layout(vars_, trunc_);
}

TruncatedSeries TruncatedSeries::constant(VariableSet vars, Truncation trunc, const Rational& value) {
  TruncatedSeries s(vars, trunc);
  if (value != 0 && s.within(GroupDegrees{})) {
    s.terms_.push_back({Monomial{}, value});
    s.terms_.back().coeff.canonicalize();
  }
  return s;
}

TruncatedSeries TruncatedSeries::variable(VariableSet vars, Truncation trunc, std::string_view name) {
  TruncatedSeries s(vars, trunc);
  Monomial m;
  m.set_exponent(vars.index_of(name), 1);
  if (s.within(degrees(m, vars))) s.terms_.push_back({m, Rational(1)});
  return s;
}

TruncatedSeries TruncatedSeries::from_terms(VariableSet vars, Truncation trunc,
                                            std::vector<std::pair<std::vector<int>, Rational>> terms) {
  std::vector<Term> mono;
  mono.reserve(terms.size());
  for (auto& [exps, c] : terms) {
    if (exps.size() != static_cast<std::size_t>(vars.size())) {
      throw IncompatibleSeries("exponent vector length " + std::to_string(exps.size()) + " != " +
                               std::to_string(vars.size()));
    }
    mono.push_back({Monomial::from_exponents(exps), std::move(c)});
  }
  return from_monomials(vars, trunc, std::move(mono));
}

TruncatedSeries TruncatedSeries::from_monomials(VariableSet vars, Truncation trunc, std::vector<Term> terms) {
  TruncatedSeries s(vars, trunc);
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
  for (auto& t : terms) {
    if (!s.within(degrees(t.monomial, vars))) continue;
    t.coeff.canonicalize();
    if (!s.terms_.empty() && s.terms_.back().monomial == t.monomial) {
      s.terms_.back().coeff += t.coeff;
    } else {
      s.terms_.push_back(std::move(t));
    }
  }
  std::erase_if(s.terms_, [](const Term& t) { return t.coeff == 0; });
  return s;
}

Rational TruncatedSeries::constant_term() const { return coefficient(Monomial{}); }

Rational TruncatedSeries::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& key) { return t.monomial < key; });
  if (it != terms_.end() && it->monomial == m) return it->coeff;
  return 0;
}

Rational TruncatedSeries::coefficient(std::span<const int> exps) const {
  if (exps.size() != static_cast<std::size_t>(vars_.size())) {
    throw IncompatibleSeries("exponent vector length mismatch");
  }
  return coefficient(Monomial::from_exponents(exps));
}

TruncatedSeries TruncatedSeries::truncated(const Truncation& target) const {
  TruncatedSeries s(vars_, Truncation::min(trunc_, target));
  for (const auto& t : terms_) {
    if (s.within(degrees(t.monomial, vars_))) s.terms_.push_back(t);
  }
  return s;
}

TruncatedSeries TruncatedSeries::derivative(int var) const {
  if (var < 0 || var >= vars_.size()) throw UnknownVariable("variable index " + std::to_string(var));
  Truncation tr = trunc_;
  int& order = tr.of(vars_.group(var));
  order = std::max(order - 1, -1);
  TruncatedSeries s(vars_, tr);
  for (const auto& t : terms_) {
    const int e = t.monomial.exponent(var);
    if (e == 0) continue;
    Monomial m = t.monomial;
    m.set_exponent(var, e - 1);
    if (!s.within(degrees(m, vars_))) continue;
    s.terms_.push_back({m, t.coeff * e});
  }
  // Lowering one exponent keeps the lexicographic order of the packed keys.
  return s;
}

TruncatedSeries TruncatedSeries::derivative(std::string_view var) const { return derivative(vars_.index_of(var)); }

TruncatedSeries TruncatedSeries::reciprocal() const {
  const Rational a0 = constant_term();
  if (a0 == 0) throw NotInvertible("constant term is zero");
  const Rational inv0 = 1 / a0;
  TruncatedSeries f = *this * inv0;
  f -= constant(vars_, trunc_, 1);
  const TruncatedSeries one = constant(vars_, trunc_, 1);
  // Every power of f raises total degree by one, so the geometric sum
  // terminates after the sum of all group orders.
  const int steps = std::max(trunc_.t, 0) + std::max(trunc_.novikov, 0) + std::max(trunc_.q, 0);
  TruncatedSeries r = one;
  for (int k = 0; k < steps; ++k) r = one - f * r;
  return r * inv0;
}

TruncatedSeries TruncatedSeries::embedded(const VariableSet& vars, const Truncation& trunc) const {
  if (vars.t_count < vars_.t_count || vars.novikov_count < vars_.novikov_count || (vars_.has_q && !vars.has_q)) {
    throw IncompatibleSeries("target variable set does not contain the source variables");
  }
  Truncation tr = trunc;
  if (vars_.t_count > 0) tr.t = std::min(tr.t, trunc_.t);
  if (vars_.novikov_count > 0) tr.novikov = std::min(tr.novikov, trunc_.novikov);
  if (vars_.has_q) tr.q = std::min(tr.q, trunc_.q);
  TruncatedSeries s(vars, tr);
  s.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m;
    for (int v = 0; v < vars_.t_count; ++v) m.set_exponent(v, t.monomial.exponent(v));
    for (int v = 0; v < vars_.novikov_count; ++v) {
      m.set_exponent(vars.t_count + v, t.monomial.exponent(vars_.t_count + v));
    }
    if (vars_.has_q) m.set_exponent(vars.size() - 1, t.monomial.exponent(vars_.size() - 1));
    if (s.within(degrees(m, vars))) s.terms_.push_back({m, t.coeff});
  }
  std::sort(s.terms_.begin(), s.terms_.end(), [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
  return s;
}

TruncatedSeries TruncatedSeries::at_zero(VarGroup g) const {
  TruncatedSeries s(vars_, trunc_);
  for (const auto& t : terms_) {
    const GroupDegrees d = degrees(t.monomial, vars_);
    const int dg = g == VarGroup::t ? d.t : g == VarGroup::novikov ? d.novikov : d.q;
    if (dg == 0) s.terms_.push_back(t);
  }
  return s;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries s = *this;
  for (auto& t : s.terms_) t.coeff = -t.coeff;
  return s;
}

void TruncatedSeries::check_compatible(const TruncatedSeries& o, const char* op) const {
  if (!(vars_ == o.vars_)) {
    throw IncompatibleSeries(std::string(op) + ": variable sets differ");
  }
}

void TruncatedSeries::add_scaled(const TruncatedSeries& o, int sign) {
  check_compatible(o, sign > 0 ? "add" : "sub");
  const Truncation tr = Truncation::min(trunc_, o.trunc_);
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto keep = [&](const Monomial& m) {
    const GroupDegrees d = degrees(m, vars_);
    return d.t <= tr.t && d.novikov <= tr.novikov && d.q <= tr.q;
  };
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->monomial < b->monomial)) {
      if (keep(a->monomial)) merged.push_back(std::move(*a));
      ++a;
    } else if (a == terms_.end() || b->monomial < a->monomial) {
      if (keep(b->monomial)) merged.push_back({b->monomial, sign > 0 ? b->coeff : Rational(-b->coeff)});
      ++b;
    } else {
      Rational c = sign > 0 ? Rational(a->coeff + b->coeff) : Rational(a->coeff - b->coeff);
      if (c != 0 && keep(a->monomial)) merged.push_back({a->monomial, std::move(c)});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  trunc_ = tr;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  add_scaled(o, +1);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
  add_scaled(o, -1);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  Rational c = s;
  c.canonicalize();
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.check_compatible(b, "mul");
  TruncatedSeries out(a.vars_, Truncation::min(a.trunc_, b.trunc_));
  if (a.terms_.empty() || b.terms_.empty()) return out;

  struct Entry {
    const TruncatedSeries::Term* term;
    GroupDegrees deg;
  };
  auto collect = [&](const TruncatedSeries& s) {
    std::vector<Entry> v;
    v.reserve(s.terms_.size());
    for (const auto& t : s.terms_) {
      GroupDegrees d = degrees(t.monomial, s.vars_);
      if (out.within(d)) v.push_back({&t, d});
    }
    std::stable_sort(v.begin(), v.end(), [](const Entry& x, const Entry& y) { return x.deg.t < y.deg.t; });
    return v;
  };
  const std::vector<Entry> ea = collect(a);
  const std::vector<Entry> eb = collect(b);
  const Truncation& tr = out.trunc_;

  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(ea.size() * 4 + eb.size() * 4);
  Rational prod;
  for (const Entry& x : ea) {
    const int room_t = tr.t - x.deg.t;
    for (const Entry& y : eb) {
      if (y.deg.t > room_t) break;
      if (x.deg.novikov + y.deg.novikov > tr.novikov || x.deg.q + y.deg.q > tr.q) continue;
      mpq_mul(prod.get_mpq_t(), x.term->coeff.get_mpq_t(), y.term->coeff.get_mpq_t());
      acc[x.term->monomial + y.term->monomial] += prod;
    }
  }
  out.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) out.terms_.push_back({m, std::move(c)});
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const TruncatedSeries::Term& x, const TruncatedSeries::Term& y) { return x.monomial < y.monomial; });
  return out;
}

TruncatedSeries series_arith(const TruncatedSeries& a, const TruncatedSeries& b, ArithOp op) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
  }
  return a;
}

std::string to_string(const TruncatedSeries& s) {
  if (s.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : s.terms()) {
    Rational c = t.coeff;
    if (!first) {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    } else if (c < 0) {
      os << "-";
      c = -c;
    }
    first = false;
    std::string mono;
    for (int v = 0; v < s.vars().size(); ++v) {
      const int e = t.monomial.exponent(v);
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += s.vars().name(v);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) {
      os << to_string(c);
    } else if (c == 1) {
      os << mono;
    } else {
      os << to_string(c) << "*" << mono;
    }
  }
  return os.str();
}

}  // namespace qkt
