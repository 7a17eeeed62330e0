#include "polyeb/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "polyeb/errors.hpp"

namespace polyeb {

double ipow(double v, std::uint32_t e) {
  double result = 1.0;
  double base = v;
  while (e != 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e != 0) base *= base;
  }
  return result;
}

Polynomial Polynomial::constant(std::size_t num_vars, const Rational& c) {
  Polynomial p(num_vars);
  p.add_term(Exponent(num_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  if (index >= num_vars) throw ArgumentError("variable index out of range");
  Exponent e(num_vars, 0);
  e[index] = 1;
  Polynomial p(num_vars);
  p.add_term(e, Rational(1));
  return p;
}

Polynomial Polynomial::monomial(std::size_t num_vars, const Exponent& e, const Rational& c) {
  Polynomial p(num_vars);
  p.add_term(e, c);
  return p;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (e.size() != num_vars_) {
    throw ArgumentError("exponent length " + std::to_string(e.size()) + " does not match " +
                        std::to_string(num_vars_) + " variables");
  }
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
  rebuild_cache();
}

void Polynomial::rebuild_cache() {
  coeffs_.clear();
  powers_.clear();
  coeffs_.reserve(terms_.size());
  powers_.reserve(terms_.size() * num_vars_);
  for (const auto& [e, c] : terms_) {
    coeffs_.push_back(c.get_d());
    powers_.insert(powers_.end(), e.begin(), e.end());
  }
}

void Polynomial::check_arity(std::size_t got) const {
  if (got != num_vars_) {
    throw ArgumentError("point has " + std::to_string(got) + " coordinates, polynomial has " +
                        std::to_string(num_vars_) + " variables");
  }
}

unsigned Polynomial::degree() const {
  unsigned best = 0;
  for (const auto& [e, c] : terms_) {
    best = std::max(best, std::accumulate(e.begin(), e.end(), 0U));
  }
  return best;
}

unsigned Polynomial::degree_in(std::span<const std::size_t> vars) const {
  unsigned best = 0;
  for (const auto& [e, c] : terms_) {
    unsigned s = 0;
    for (std::size_t v : vars) s += e.at(v);
    best = std::max(best, s);
  }
  return best;
}

double Polynomial::eval(std::span<const double> x) const {
  check_arity(x.size());
  double sum = 0.0;
  const std::uint32_t* row = powers_.data();
  for (double c : coeffs_) {
    double term = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (row[i] != 0) term *= ipow(x[i], row[i]);
    }
    sum += term;
    row += num_vars_;
  }
  return sum;
}

Rational Polynomial::eval_exact(std::span<const Rational> x) const {
  check_arity(x.size());
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      for (std::uint32_t k = 0; k < e[i]; ++k) term *= x[i];
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::partial(std::size_t i) const {
  if (i >= num_vars_) throw ArgumentError("partial: variable index out of range");
  Polynomial out(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent f = e;
    f[i] -= 1;
    out.terms_.emplace(std::move(f), c * e[i]);
  }
  out.rebuild_cache();
  return out;
}

std::vector<Polynomial> Polynomial::gradient() const {
  std::vector<Polynomial> g;
  g.reserve(num_vars_);
  for (std::size_t i = 0; i < num_vars_; ++i) g.push_back(partial(i));
  return g;
}

std::vector<Polynomial> Polynomial::hessian() const {
  std::vector<Polynomial> h(num_vars_ * num_vars_);
  for (std::size_t i = 0; i < num_vars_; ++i) {
    Polynomial pi = partial(i);
    for (std::size_t j = i; j < num_vars_; ++j) {
      h[i * num_vars_ + j] = pi.partial(j);
      h[j * num_vars_ + i] = h[i * num_vars_ + j];
    }
  }
  return h;
}

Polynomial Polynomial::embed(std::size_t new_num_vars, std::span<const std::size_t> index_map) const {
  if (index_map.size() != num_vars_) throw ArgumentError("embed: index map has wrong length");
  Polynomial out(new_num_vars);
  for (const auto& [e, c] : terms_) {
    Exponent f(new_num_vars, 0);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i] == 0) continue;
      if (index_map[i] >= new_num_vars) throw ArgumentError("embed: target index out of range");
      f[index_map[i]] += e[i];
    }
    auto [it, inserted] = out.terms_.try_emplace(std::move(f), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) out.terms_.erase(it);
    }
  }
  out.rebuild_cache();
  return out;
}

Polynomial Polynomial::compose(std::span<const Polynomial> images) const {
  if (images.size() != num_vars_) throw ArgumentError("compose: need one image per variable");
  std::size_t target = images.empty() ? 0 : images[0].num_vars();
  for (const auto& q : images) {
    if (q.num_vars() != target) throw ArgumentError("compose: images disagree on arity");
  }
  Polynomial out(target);
  for (const auto& [e, c] : terms_) {
    Polynomial term = constant(target, c);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i] != 0) term = term * images[i].pow(e[i]);
    }
    out += term;
  }
  return out;
}

bool Polynomial::depends_on(std::size_t i) const {
  for (const auto& [e, c] : terms_) {
    if (e.at(i) != 0) return true;
  }
  return false;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial result = constant(num_vars_, Rational(1));
  Polynomial base = *this;
  while (k != 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k != 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  out.rebuild_cache();
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.num_vars_ != num_vars_) throw ArgumentError("polynomial arity mismatch in +");
  for (const auto& [e, c] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  rebuild_cache();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) { return *this += -other; }

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& [e, v] : terms_) v *= c;
  }
  rebuild_cache();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw ArgumentError("polynomial arity mismatch in *");
  Polynomial out(a.num_vars_);
  Exponent f(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = ea[i] + eb[i];
      Rational c = ca * cb;
      auto [it, inserted] = out.terms_.try_emplace(f, c);
      if (!inserted) {
        it->second += c;
        if (it->second == 0) out.terms_.erase(it);
      }
    }
  }
  out.rebuild_cache();
  return out;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    Rational mag = abs(c);
    bool any_var = std::any_of(e.begin(), e.end(), [](std::uint32_t k) { return k != 0; });
    if (!any_var || mag != 1) os << polyeb::to_string(mag);
    bool need_star = !any_var || mag != 1;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (need_star) os << "*";
      need_star = true;
      os << (i < names.size() ? names[i] : "x" + std::to_string(i + 1));
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

}  // namespace polyeb
