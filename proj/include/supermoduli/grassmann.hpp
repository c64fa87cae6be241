#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <vector>

namespace supermoduli {

using Coeff = std::complex<double>;

/// Coefficients smaller than this are dropped when canonicalizing.
/// Configurable; set once at startup if a different value is needed.
inline double kPruneEps = 1e-14;
/// An element is treated as invertible iff |body| exceeds this.
inline double kInvertEps = 1e-10;
/// Generator subsets are stored as 64-bit sets; two bits are reserved.
inline constexpr int kMaxGenerators = 62;

enum class Parity { Even, Odd, Mixed };

/// An element of the complexified Grassmann algebra on s generators,
/// stored as a sparse map from generator subsets (bit sets over
/// {1..s}, bit i-1 <-> generator eta_i) to complex coefficients.
/// Values are immutable after construction apart from operator+= style
/// rebinding; all operations return fresh values.
class GrassmannNumber {
 public:
  GrassmannNumber() : s_(0) {}
  explicit GrassmannNumber(int s);
  GrassmannNumber(int s, Coeff constant);

  static GrassmannNumber scalar(int s, Coeff c) { return GrassmannNumber(s, c); }
  /// eta_i, indices are 1-based.
  static GrassmannNumber generator(int s, int i);
  /// c * eta_{i1} eta_{i2} ... with strictly ascending indices.
  static GrassmannNumber term(int s, std::initializer_list<int> indices, Coeff c);
  static GrassmannNumber term(int s, const std::vector<int>& indices, Coeff c);

  int generators() const { return s_; }
  const std::map<std::uint64_t, Coeff>& terms() const { return terms_; }

  Coeff body() const;
  GrassmannNumber soul() const;
  Parity parity() const;

  bool is_zero(double eps = kPruneEps) const;
  /// Largest coefficient magnitude; the residual norm used by the tests.
  double max_abs() const;
  /// Same element viewed in a wider algebra (new_s >= s).
  GrassmannNumber extended(int new_s) const;

  GrassmannNumber operator-() const;
  GrassmannNumber& operator+=(const GrassmannNumber& o);
  GrassmannNumber& operator-=(const GrassmannNumber& o);
  GrassmannNumber& operator*=(const GrassmannNumber& o);
  GrassmannNumber& operator*=(Coeff c);

  friend GrassmannNumber operator+(GrassmannNumber a, const GrassmannNumber& b) { return a += b; }
  friend GrassmannNumber operator-(GrassmannNumber a, const GrassmannNumber& b) { return a -= b; }
  friend GrassmannNumber operator*(const GrassmannNumber& a, const GrassmannNumber& b);
  friend GrassmannNumber operator*(GrassmannNumber a, Coeff c) { return a *= c; }
  friend GrassmannNumber operator*(Coeff c, GrassmannNumber a) { return a *= c; }

  void set_term(std::uint64_t subset, Coeff c);
  void prune(double eps = kPruneEps);

 private:
  int s_;
  std::map<std::uint64_t, Coeff> terms_;

  void check_context(const GrassmannNumber& o) const;
};

/// Sign of merging two disjoint ascending index lists, one transposition
/// per crossing pair; this is what encodes eta_i eta_j = -eta_j eta_i.
int koszul_sign(std::uint64_t a, std::uint64_t b);

/// Difference norm, max over coefficients.
double distance(const GrassmannNumber& a, const GrassmannNumber& b);

/// Neumann-series inverse; throws std::domain_error when |body| <= eps.
GrassmannNumber invert(const GrassmannNumber& a, double eps = kInvertEps);

/// Principal square root of an even element with invertible body.
/// The other root is the negative.
GrassmannNumber sqrt_even(const GrassmannNumber& a, double eps = kInvertEps);

/// Super dimension m|n. Negative components may appear in intermediate
/// arithmetic only.
struct SDim {
  int even = 0;
  int odd = 0;

  friend SDim operator+(SDim a, SDim b) { return {a.even + b.even, a.odd + b.odd}; }
  friend SDim operator-(SDim a, SDim b) { return {a.even - b.even, a.odd - b.odd}; }
  friend SDim operator*(int k, SDim a) { return {k * a.even, k * a.odd}; }
  friend bool operator==(SDim a, SDim b) { return a.even == b.even && a.odd == b.odd; }
  int total() const { return even + odd; }
};

}  // namespace supermoduli
