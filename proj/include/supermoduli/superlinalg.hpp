#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "supermoduli/grassmann.hpp"

namespace supermoduli {

/// A C-point of R^{m|n}: m even coordinates followed by n odd ones.
struct SuperVector {
  SDim dims;
  std::vector<GrassmannNumber> coords;

  SuperVector() = default;
  SuperVector(SDim d, std::vector<GrassmannNumber> c);
  static SuperVector zero(SDim d, int s);

  bool slot_is_odd(int i) const { return i >= dims.even; }
  int size() const { return dims.total(); }
  /// Throws when an even slot holds an odd element or vice versa.
  void check_parities() const;
};

SuperVector operator+(const SuperVector& a, const SuperVector& b);
double distance(const SuperVector& a, const SuperVector& b);

/// Reflection of the even directions at the origin (z = 1 flips signs).
SuperVector reflect_even(const SuperVector& p, int z = 1);
/// Reflection of the odd directions at the origin.
SuperVector reflect_odd(const SuperVector& p, int z = 1);

/// Graded (r|s) x (m|n) matrix over Lambda_s, dense, stored in block order
/// (even rows first, then odd rows; same for columns). An even matrix has
/// even entries where row and column parities agree and odd entries in the
/// mixed blocks; an odd matrix is the mirror image. Checked on construction.
struct SuperMatrix {
  SDim row_dims;
  SDim col_dims;
  Parity declared_parity = Parity::Even;
  std::vector<std::vector<GrassmannNumber>> entries;

  SuperMatrix() = default;
  SuperMatrix(SDim rows, SDim cols, Parity parity, std::vector<std::vector<GrassmannNumber>> e);
  static SuperMatrix zero(SDim rows, SDim cols, Parity parity, int s);
  static SuperMatrix identity(SDim dims, int s);

  bool row_is_odd(int i) const { return i >= row_dims.even; }
  bool col_is_odd(int j) const { return j >= col_dims.even; }
  int num_rows() const { return row_dims.total(); }
  int num_cols() const { return col_dims.total(); }
  const GrassmannNumber& at(int i, int j) const { return entries[i][j]; }
  GrassmannNumber& at(int i, int j) { return entries[i][j]; }
};

SuperMatrix matmul(const SuperMatrix& a, const SuperMatrix& b);
SuperVector matvec(const SuperVector& q, const SuperMatrix& m);  // row vector times matrix
double distance(const SuperMatrix& a, const SuperMatrix& b);

/// Translation action of R^{r|s} on R^{m|n}: P + Q L.
SuperVector apply_translation(const SuperMatrix& l, const SuperVector& q, const SuperVector& p);

struct RankResult {
  std::optional<SDim> rank;                      // empty means NoRank
  std::optional<SuperMatrix> left_witness;       // U with U A V = standard form
  std::optional<SuperMatrix> right_witness;      // V
  std::optional<std::pair<int, int>> blocked_at; // residual position when NoRank
  bool has_rank() const { return rank.has_value(); }
};

/// Gaussian elimination over Lambda_s using only pivots with invertible
/// body, separately on the even-even and odd-odd blocks after clearing
/// pivot rows and columns across all blocks. Returns the rank with the
/// two transformation witnesses, or NoRank with the position of a
/// residual entry all of whose pivot candidates have nilpotent body.
RankResult standard_rank_form(const SuperMatrix& a, double eps = kInvertEps);

/// The block-identity pattern of the given rank, as a matrix.
SuperMatrix standard_form_matrix(SDim rows, SDim cols, SDim rank, int s);

/// Solve x A = b for a row vector x (same convention as the point action),
/// via elimination with invertible-body pivots. Throws std::domain_error
/// when no invertible pivot exists.
std::vector<GrassmannNumber> solve_row_linear(const SuperMatrix& a,
                                              const std::vector<GrassmannNumber>& b);

/// Inverse of a square matrix whose reduced matrix is invertible.
SuperMatrix inverse(const SuperMatrix& a);

}  // namespace supermoduli
