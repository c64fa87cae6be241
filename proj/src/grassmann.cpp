#include "supermoduli/grassmann.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace supermoduli {

namespace {

void check_generator_count(int s) {
  if (s < 0 || s > kMaxGenerators)
    throw std::invalid_argument("generator count must be in [0, " +
                                std::to_string(kMaxGenerators) + "], got " + std::to_string(s));
}

}  // namespace

GrassmannNumber::GrassmannNumber(int s) : s_(s) { check_generator_count(s); }

GrassmannNumber::GrassmannNumber(int s, Coeff constant) : s_(s) {
  check_generator_count(s);
  if (std::abs(constant) > 0.0) terms_[0] = constant;
}

GrassmannNumber GrassmannNumber::generator(int s, int i) {
  check_generator_count(s);
  if (i < 1 || i > s) throw std::invalid_argument("generator index out of range");
  GrassmannNumber g(s);
  g.terms_[std::uint64_t{1} << (i - 1)] = 1.0;
  return g;
}

GrassmannNumber GrassmannNumber::term(int s, std::initializer_list<int> indices, Coeff c) {
  return term(s, std::vector<int>(indices), c);
}

GrassmannNumber GrassmannNumber::term(int s, const std::vector<int>& indices, Coeff c) {
  check_generator_count(s);
  std::uint64_t subset = 0;
  int prev = 0;
  for (int i : indices) {
    if (i < 1 || i > s) throw std::invalid_argument("generator index out of range");
    if (i <= prev) throw std::invalid_argument("generator indices must be strictly ascending");
    subset |= std::uint64_t{1} << (i - 1);
    prev = i;
  }
  GrassmannNumber g(s);
  g.set_term(subset, c);
  return g;
}

void GrassmannNumber::set_term(std::uint64_t subset, Coeff c) {
  if (std::abs(c) <= kPruneEps) {
    terms_.erase(subset);
  } else {
    terms_[subset] = c;
  }
}

Coeff GrassmannNumber::body() const {
  auto it = terms_.find(0);
  return it == terms_.end() ? Coeff{0.0} : it->second;
}

GrassmannNumber GrassmannNumber::soul() const {
  GrassmannNumber r(s_);
  for (const auto& [subset, c] : terms_)
    if (subset != 0) r.terms_[subset] = c;
  return r;
}

Parity GrassmannNumber::parity() const {
  bool has_even = false, has_odd = false;
  for (const auto& [subset, c] : terms_) {
    (void)c;
    if (std::popcount(subset) % 2 == 0)
      has_even = true;
    else
      has_odd = true;
  }
  if (has_even && has_odd) return Parity::Mixed;
  if (has_odd) return Parity::Odd;
  return Parity::Even;  // zero counts as even by convention
}

bool GrassmannNumber::is_zero(double eps) const {
  for (const auto& [subset, c] : terms_) {
    (void)subset;
    if (std::abs(c) > eps) return false;
  }
  return true;
}

double GrassmannNumber::max_abs() const {
  double m = 0.0;
  for (const auto& [subset, c] : terms_) {
    (void)subset;
    m = std::max(m, std::abs(c));
  }
  return m;
}

GrassmannNumber GrassmannNumber::extended(int new_s) const {
  if (new_s < s_) throw std::invalid_argument("cannot shrink generator context");
  GrassmannNumber r(new_s);
  r.terms_ = terms_;
  return r;
}

void GrassmannNumber::check_context(const GrassmannNumber& o) const {
  if (s_ != o.s_)
    throw std::invalid_argument("mismatched generator contexts: " + std::to_string(s_) +
                                " vs " + std::to_string(o.s_));
}

GrassmannNumber GrassmannNumber::operator-() const {
  GrassmannNumber r(s_);
  for (const auto& [subset, c] : terms_) r.terms_[subset] = -c;
  return r;
}

GrassmannNumber& GrassmannNumber::operator+=(const GrassmannNumber& o) {
  check_context(o);
  for (const auto& [subset, c] : o.terms_) terms_[subset] += c;
  prune();
  return *this;
}

GrassmannNumber& GrassmannNumber::operator-=(const GrassmannNumber& o) {
  check_context(o);
  for (const auto& [subset, c] : o.terms_) terms_[subset] -= c;
  prune();
  return *this;
}

int koszul_sign(std::uint64_t a, std::uint64_t b) {
  int swaps = 0;
  std::uint64_t t = b;
  while (t) {
    int bit = std::countr_zero(t);
    swaps += std::popcount(a >> (bit + 1));
    t &= t - 1;
  }
  return (swaps & 1) ? -1 : 1;
}

GrassmannNumber operator*(const GrassmannNumber& a, const GrassmannNumber& b) {
  a.check_context(b);
  GrassmannNumber r(a.s_);
  for (const auto& [sa, ca] : a.terms_) {
    for (const auto& [sb, cb] : b.terms_) {
      if (sa & sb) continue;  // repeated generator, nilpotency
      Coeff c = ca * cb;
      if (koszul_sign(sa, sb) < 0) c = -c;
      r.terms_[sa | sb] += c;
    }
  }
  r.prune();
  return r;
}

GrassmannNumber& GrassmannNumber::operator*=(const GrassmannNumber& o) {
  *this = *this * o;
  return *this;
}

GrassmannNumber& GrassmannNumber::operator*=(Coeff c) {
  for (auto& [subset, coeff] : terms_) {
    (void)subset;
    coeff *= c;
  }
  prune();
  return *this;
}

void GrassmannNumber::prune(double eps) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= eps)
      it = terms_.erase(it);
    else
      ++it;
  }
}

double distance(const GrassmannNumber& a, const GrassmannNumber& b) {
  return (a - b).max_abs();
}

GrassmannNumber invert(const GrassmannNumber& a, double eps) {
  Coeff b = a.body();
  if (std::abs(b) <= eps)
    throw std::domain_error("GrassmannNumber not invertible: body magnitude " +
                            std::to_string(std::abs(b)));
  // a = b (1 + n) with n nilpotent, so a^-1 = b^-1 sum_k (-n)^k.
  GrassmannNumber n = a.soul() * (Coeff{1.0} / b);
  GrassmannNumber acc(a.generators(), 1.0);
  GrassmannNumber pow(a.generators(), 1.0);
  for (int k = 1; k <= a.generators(); ++k) {
    pow = pow * (-n);
    if (pow.is_zero()) break;
    acc += pow;
  }
  return acc * (Coeff{1.0} / b);
}

GrassmannNumber sqrt_even(const GrassmannNumber& a, double eps) {
  if (a.parity() != Parity::Even)
    throw std::invalid_argument("sqrt_even requires an even element");
  Coeff b = a.body();
  if (std::abs(b) <= eps)
    throw std::domain_error("sqrt_even requires invertible body");
  // sqrt(b (1 + n)) = sqrt(b) sum_k binom(1/2, k) n^k; the series truncates.
  GrassmannNumber n = a.soul() * (Coeff{1.0} / b);
  GrassmannNumber acc(a.generators(), 1.0);
  GrassmannNumber pow(a.generators(), 1.0);
  double binom = 1.0;
  for (int k = 1; k <= a.generators(); ++k) {
    binom *= (0.5 - (k - 1)) / k;
    pow = pow * n;
    if (pow.is_zero()) break;
    acc += pow * Coeff{binom};
  }
  return acc * std::sqrt(b);
}

}  // namespace supermoduli
