#include "supermoduli/superlinalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace supermoduli {

namespace {

Parity required_entry_parity(bool row_odd, bool col_odd, Parity declared) {
  bool odd = (row_odd != col_odd);
  if (declared == Parity::Odd) odd = !odd;
  return odd ? Parity::Odd : Parity::Even;
}

}  // namespace

SuperVector::SuperVector(SDim d, std::vector<GrassmannNumber> c) : dims(d), coords(std::move(c)) {
  if (static_cast<int>(coords.size()) != dims.total())
    throw std::invalid_argument("SuperVector: coordinate count does not match dimension");
  check_parities();
}

SuperVector SuperVector::zero(SDim d, int s) {
  SuperVector v;
  v.dims = d;
  v.coords.assign(d.total(), GrassmannNumber(s));
  return v;
}

void SuperVector::check_parities() const {
  for (int i = 0; i < size(); ++i) {
    Parity p = coords[i].parity();
    if (coords[i].is_zero()) continue;
    if (slot_is_odd(i) ? p != Parity::Odd : p != Parity::Even)
      throw std::invalid_argument("SuperVector: parity violation in slot " + std::to_string(i));
  }
}

SuperVector operator+(const SuperVector& a, const SuperVector& b) {
  if (!(a.dims == b.dims)) throw std::invalid_argument("SuperVector: dimension mismatch");
  SuperVector r = a;
  for (int i = 0; i < r.size(); ++i) r.coords[i] += b.coords[i];
  return r;
}

double distance(const SuperVector& a, const SuperVector& b) {
  if (!(a.dims == b.dims)) throw std::invalid_argument("SuperVector: dimension mismatch");
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, distance(a.coords[i], b.coords[i]));
  return m;
}

SuperVector reflect_even(const SuperVector& p, int z) {
  SuperVector r = p;
  if (z % 2 != 0)
    for (int i = 0; i < r.dims.even; ++i) r.coords[i] = -r.coords[i];
  return r;
}

SuperVector reflect_odd(const SuperVector& p, int z) {
  SuperVector r = p;
  if (z % 2 != 0)
    for (int i = r.dims.even; i < r.size(); ++i) r.coords[i] = -r.coords[i];
  return r;
}

SuperMatrix::SuperMatrix(SDim rows, SDim cols, Parity parity,
                         std::vector<std::vector<GrassmannNumber>> e)
    : row_dims(rows), col_dims(cols), declared_parity(parity), entries(std::move(e)) {
  if (parity == Parity::Mixed) throw std::invalid_argument("SuperMatrix parity must be homogeneous");
  if (static_cast<int>(entries.size()) != num_rows())
    throw std::invalid_argument("SuperMatrix: row count mismatch");
  for (int i = 0; i < num_rows(); ++i) {
    if (static_cast<int>(entries[i].size()) != num_cols())
      throw std::invalid_argument("SuperMatrix: column count mismatch");
    for (int j = 0; j < num_cols(); ++j) {
      const GrassmannNumber& g = entries[i][j];
      if (g.is_zero()) continue;
      if (g.parity() != required_entry_parity(row_is_odd(i), col_is_odd(j), parity))
        throw std::invalid_argument("SuperMatrix: block parity violation at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
}

SuperMatrix SuperMatrix::zero(SDim rows, SDim cols, Parity parity, int s) {
  std::vector<std::vector<GrassmannNumber>> e(
      rows.total(), std::vector<GrassmannNumber>(cols.total(), GrassmannNumber(s)));
  return SuperMatrix(rows, cols, parity, std::move(e));
}

SuperMatrix SuperMatrix::identity(SDim dims, int s) {
  SuperMatrix m = zero(dims, dims, Parity::Even, s);
  for (int i = 0; i < dims.total(); ++i) m.entries[i][i] = GrassmannNumber(s, 1.0);
  return m;
}

SuperMatrix matmul(const SuperMatrix& a, const SuperMatrix& b) {
  if (!(a.col_dims == b.row_dims))
    throw std::invalid_argument("matmul: inner dimensions do not match");
  int s = 0;
  if (a.num_rows() > 0 && a.num_cols() > 0) s = a.at(0, 0).generators();
  Parity parity =
      (a.declared_parity == b.declared_parity) ? Parity::Even : Parity::Odd;
  SuperMatrix r = SuperMatrix::zero(a.row_dims, b.col_dims, parity, s);
  for (int i = 0; i < a.num_rows(); ++i)
    for (int j = 0; j < b.num_cols(); ++j) {
      GrassmannNumber acc(s);
      for (int k = 0; k < a.num_cols(); ++k) acc += a.at(i, k) * b.at(k, j);
      r.at(i, j) = acc;
    }
  return r;
}

SuperVector matvec(const SuperVector& q, const SuperMatrix& m) {
  if (!(q.dims == m.row_dims)) throw std::invalid_argument("matvec: dimension mismatch");
  int s = q.size() > 0 ? q.coords[0].generators() : 0;
  SuperVector r = SuperVector::zero(m.col_dims, s);
  for (int j = 0; j < m.num_cols(); ++j) {
    GrassmannNumber acc(s);
    for (int i = 0; i < m.num_rows(); ++i) acc += q.coords[i] * m.at(i, j);
    r.coords[j] = acc;
  }
  return r;
}

double distance(const SuperMatrix& a, const SuperMatrix& b) {
  if (!(a.row_dims == b.row_dims) || !(a.col_dims == b.col_dims))
    throw std::invalid_argument("SuperMatrix distance: shape mismatch");
  double m = 0.0;
  for (int i = 0; i < a.num_rows(); ++i)
    for (int j = 0; j < a.num_cols(); ++j) m = std::max(m, distance(a.at(i, j), b.at(i, j)));
  return m;
}

SuperVector apply_translation(const SuperMatrix& l, const SuperVector& q, const SuperVector& p) {
  if (l.declared_parity != Parity::Even)
    throw std::invalid_argument("apply_translation: the action matrix must be even");
  q.check_parities();
  p.check_parities();
  if (!(q.dims == l.row_dims) || !(p.dims == l.col_dims))
    throw std::invalid_argument("apply_translation: dimension mismatch");
  return p + matvec(q, l);
}

SuperMatrix standard_form_matrix(SDim rows, SDim cols, SDim rank, int s) {
  SuperMatrix m = SuperMatrix::zero(rows, cols, Parity::Even, s);
  for (int k = 0; k < rank.even; ++k) m.at(k, k) = GrassmannNumber(s, 1.0);
  for (int k = 0; k < rank.odd; ++k)
    m.at(rows.even + k, cols.even + k) = GrassmannNumber(s, 1.0);
  return m;
}

RankResult standard_rank_form(const SuperMatrix& a, double eps) {
  if (a.declared_parity != Parity::Even)
    throw std::invalid_argument("standard_rank_form: input must be an even matrix");
  const int nr = a.num_rows(), nc = a.num_cols();
  int s = (nr > 0 && nc > 0) ? a.at(0, 0).generators() : 0;

  SuperMatrix m = a;
  SuperMatrix u = SuperMatrix::identity(a.row_dims, s);
  SuperMatrix v = SuperMatrix::identity(a.col_dims, s);
  std::vector<int> pivot_row_of;
  std::vector<int> pivot_col_of;
  std::vector<bool> row_used(nr, false), col_used(nc, false);

  while (true) {
    // largest-body pivot among parity-matched unused positions
    int pi = -1, pj = -1;
    double best = eps;
    for (int i = 0; i < nr; ++i) {
      if (row_used[i]) continue;
      for (int j = 0; j < nc; ++j) {
        if (col_used[j]) continue;
        if (a.row_is_odd(i) != a.col_is_odd(j)) continue;
        double mag = std::abs(m.at(i, j).body());
        if (mag > best) {
          best = mag;
          pi = i;
          pj = j;
        }
      }
    }
    if (pi < 0) break;

    GrassmannNumber inv = invert(m.at(pi, pj), eps);
    for (int j = 0; j < nc; ++j) m.at(pi, j) = inv * m.at(pi, j);
    for (int j = 0; j < nr; ++j) u.at(pi, j) = inv * u.at(pi, j);
    for (int i = 0; i < nr; ++i) {
      if (i == pi) continue;
      GrassmannNumber f = m.at(i, pj);
      if (f.is_zero()) continue;
      for (int j = 0; j < nc; ++j) m.at(i, j) -= f * m.at(pi, j);
      for (int j = 0; j < nr; ++j) u.at(i, j) -= f * u.at(pi, j);
    }
    for (int j = 0; j < nc; ++j) {
      if (j == pj) continue;
      GrassmannNumber f = m.at(pi, j);
      if (f.is_zero()) continue;
      for (int i = 0; i < nr; ++i) m.at(i, j) -= m.at(i, pj) * f;
      for (int i = 0; i < nc; ++i) v.at(i, j) -= v.at(i, pj) * f;
    }
    row_used[pi] = true;
    col_used[pj] = true;
    pivot_row_of.push_back(pi);
    pivot_col_of.push_back(pj);
  }

  // a residual entry with no invertible-body pivot candidate blocks the form
  RankResult res;
  for (int i = 0; i < nr; ++i) {
    if (row_used[i]) continue;
    for (int j = 0; j < nc; ++j) {
      if (col_used[j]) continue;
      if (m.at(i, j).max_abs() > eps) {
        res.blocked_at = {i, j};
        return res;
      }
    }
  }

  // permute pivots into leading positions within each parity class
  SDim rank{0, 0};
  std::vector<int> row_perm(nr), col_perm(nc);
  {
    std::vector<int> even_rows, odd_rows, even_cols, odd_cols;
    for (size_t k = 0; k < pivot_row_of.size(); ++k) {
      if (a.row_is_odd(pivot_row_of[k])) {
        odd_rows.push_back(pivot_row_of[k]);
        odd_cols.push_back(pivot_col_of[k]);
        ++rank.odd;
      } else {
        even_rows.push_back(pivot_row_of[k]);
        even_cols.push_back(pivot_col_of[k]);
        ++rank.even;
      }
    }
    for (int i = 0; i < nr; ++i)
      if (!row_used[i]) (a.row_is_odd(i) ? odd_rows : even_rows).push_back(i);
    for (int j = 0; j < nc; ++j)
      if (!col_used[j]) (a.col_is_odd(j) ? odd_cols : even_cols).push_back(j);
    for (int k = 0; k < a.row_dims.even; ++k) row_perm[k] = even_rows[k];
    for (int k = 0; k < a.row_dims.odd; ++k) row_perm[a.row_dims.even + k] = odd_rows[k];
    for (int k = 0; k < a.col_dims.even; ++k) col_perm[k] = even_cols[k];
    for (int k = 0; k < a.col_dims.odd; ++k) col_perm[a.col_dims.even + k] = odd_cols[k];
  }
  SuperMatrix pr = SuperMatrix::zero(a.row_dims, a.row_dims, Parity::Even, s);
  for (int k = 0; k < nr; ++k) pr.at(k, row_perm[k]) = GrassmannNumber(s, 1.0);
  SuperMatrix pc = SuperMatrix::zero(a.col_dims, a.col_dims, Parity::Even, s);
  for (int k = 0; k < nc; ++k) pc.at(col_perm[k], k) = GrassmannNumber(s, 1.0);

  res.rank = rank;
  res.left_witness = matmul(pr, u);
  res.right_witness = matmul(v, pc);
  return res;
}

SuperMatrix inverse(const SuperMatrix& a) {
  if (!(a.row_dims == a.col_dims)) throw std::invalid_argument("inverse: matrix must be square");
  const int n = a.num_rows();
  int s = n > 0 ? a.at(0, 0).generators() : 0;
  SuperMatrix m = a;
  SuperMatrix inv = SuperMatrix::identity(a.row_dims, s);
  std::vector<bool> done(n, false);
  std::vector<int> pivot_of_col(n, -1);
  for (int step = 0; step < n; ++step) {
    int pi = -1, pj = -1;
    double best = kInvertEps;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      for (int j = 0; j < n; ++j) {
        if (pivot_of_col[j] >= 0) continue;
        double mag = std::abs(m.at(i, j).body());
        if (mag > best) {
          best = mag;
          pi = i;
          pj = j;
        }
      }
    }
    if (pi < 0) throw std::domain_error("inverse: matrix has no invertible reduction");
    GrassmannNumber f = invert(m.at(pi, pj));
    for (int j = 0; j < n; ++j) {
      m.at(pi, j) = f * m.at(pi, j);
      inv.at(pi, j) = f * inv.at(pi, j);
    }
    for (int i = 0; i < n; ++i) {
      if (i == pi) continue;
      GrassmannNumber g = m.at(i, pj);
      if (g.is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        m.at(i, j) -= g * m.at(pi, j);
        inv.at(i, j) -= g * inv.at(pi, j);
      }
    }
    done[pi] = true;
    pivot_of_col[pj] = pi;
  }
  // rows of the accumulator are permuted by the pivot order; restore it
  SuperMatrix out = inv;
  for (int j = 0; j < n; ++j) out.entries[j] = inv.entries[pivot_of_col[j]];
  return out;
}

std::vector<GrassmannNumber> solve_row_linear(const SuperMatrix& a,
                                              const std::vector<GrassmannNumber>& b) {
  if (static_cast<int>(b.size()) != a.num_cols())
    throw std::invalid_argument("solve_row_linear: size mismatch");
  SuperMatrix ai = inverse(a);
  std::vector<GrassmannNumber> x(a.num_rows());
  int s = a.num_rows() > 0 ? a.at(0, 0).generators() : 0;
  for (int i = 0; i < a.num_rows(); ++i) {
    GrassmannNumber acc(s);
    for (int j = 0; j < a.num_cols(); ++j) acc += b[j] * ai.at(j, i);
    x[i] = acc;
  }
  return x;
}

}  // namespace supermoduli
