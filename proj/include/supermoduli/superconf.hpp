#pragma once

#include <utility>

#include "supermoduli/superlinalg.hpp"

namespace supermoduli {

/// Default tolerance for projective equality of points.
inline constexpr double kProjectiveEps = 1e-9;
/// Default tolerance on the group relations.
inline constexpr double kRelationEps = 1e-9;

/// A C-point of P^{1|1} in homogeneous coordinates [Z1 : Z2 : Theta],
/// up to multiplication by an invertible scalar. Z1, Z2 are even, Theta
/// is odd, and at least one of the Z bodies is invertible.
struct ProjectivePoint {
  GrassmannNumber Z1, Z2, Theta;

  ProjectivePoint() = default;
  ProjectivePoint(GrassmannNumber z1, GrassmannNumber z2, GrassmannNumber theta);

  static ProjectivePoint zero(int s);      // [0:1:0]
  static ProjectivePoint one(int s);       // [1:1:0]
  static ProjectivePoint one_eps(const GrassmannNumber& eps);  // [1:1:eps]
  static ProjectivePoint infinity(int s);  // [1:0:0]
  /// [z : 1 : theta]
  static ProjectivePoint affine(const GrassmannNumber& z, const GrassmannNumber& theta);

  int generators() const { return Z1.generators(); }
  /// Canonical representative: divided by whichever of Z1, Z2 has the
  /// larger body magnitude.
  ProjectivePoint normalized() const;
  /// Same point, representative scaled by an invertible lambda.
  ProjectivePoint scaled(const GrassmannNumber& lambda) const;

  /// Chart coordinates (z1, theta1) = (Z1/Z2, Theta/Z2); requires Z2 invertible.
  std::pair<GrassmannNumber, GrassmannNumber> chart1() const;
  /// Chart coordinates (z2, theta2) = (Z2/Z1, Theta/Z1); requires Z1 invertible.
  std::pair<GrassmannNumber, GrassmannNumber> chart2() const;

  /// Reduced point on P^1 as a body pair (bZ1, bZ2).
  std::pair<Coeff, Coeff> reduced() const { return {Z1.body(), Z2.body()}; }
};

/// Max componentwise coefficient deviation between the canonical
/// representatives; large when the two points sit in different charts.
double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q);
bool projectively_equal(const ProjectivePoint& p, const ProjectivePoint& q,
                        double tol = kProjectiveEps);
/// Chordal distance of the reduced points on P^1.
double reduced_chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q);

/// Element of SpGL(2|1): a 3x3 even supermatrix with blocks
///   ( a     c     gamma )
///   ( b     d     delta )
///   ( alpha beta  e     )
/// subject to the four superconformality relations
///   a d - b c - gamma delta = 1,   a beta - c alpha + e gamma = 0,
///   e^2 + 2 alpha beta = 1,        b beta - d alpha + e delta = 0.
struct SpGL21 {
  SuperMatrix mat;

  SpGL21() = default;
  explicit SpGL21(SuperMatrix m, double tol = kRelationEps);

  int generators() const { return mat.at(0, 0).generators(); }
  const GrassmannNumber& a() const { return mat.at(0, 0); }
  const GrassmannNumber& c() const { return mat.at(0, 1); }
  const GrassmannNumber& gamma() const { return mat.at(0, 2); }
  const GrassmannNumber& b() const { return mat.at(1, 0); }
  const GrassmannNumber& d() const { return mat.at(1, 1); }
  const GrassmannNumber& delta() const { return mat.at(1, 2); }
  const GrassmannNumber& alpha() const { return mat.at(2, 0); }
  const GrassmannNumber& beta() const { return mat.at(2, 1); }
  const GrassmannNumber& e() const { return mat.at(2, 2); }
};

/// Largest residual of the four SpGL(2|1) relations.
double sp21_residual(const SuperMatrix& m);

SpGL21 identity_spgl21(int s);
/// Lift of a Mobius transformation (a0 z + b0)/(c0 z + d0), a0 d0 - b0 c0 = 1.
SpGL21 mobius_lift(int s, Coeff a0, Coeff b0, Coeff c0, Coeff d0);
/// Reflection of the odd direction, diag(-1, -1, 1).
SpGL21 xi_minus(int s);
/// Maps 0 -> 1_{-i eps}, 1_eps -> 0, infinity -> infinity.
SpGL21 swap_zero_one(const GrassmannNumber& eps);
/// Maps 0 -> 0, 1_eps -> infinity, infinity -> 1_{-i eps}.
SpGL21 swap_one_infinity(const GrassmannNumber& eps);
/// Rows are representatives of the standard triple (0, 1_eps, infinity);
/// multiplying it by L on the right lists the images of the triple.
SuperMatrix standard_triple_matrix(const GrassmannNumber& eps);

/// Action on projective coordinates, row vector times matrix.
ProjectivePoint act(const SpGL21& l, const ProjectivePoint& p);
/// Action in the (z1, theta1) chart; throws std::domain_error when the
/// image leaves the chart.
std::pair<GrassmannNumber, GrassmannNumber> act_chart(const SpGL21& l,
                                                      const GrassmannNumber& z,
                                                      const GrassmannNumber& theta);

/// Matrix product; the relations are re-verified and a residual above
/// 1e-8 signals numerical degradation.
SpGL21 compose(const SpGL21& l1, const SpGL21& l2);
SpGL21 inverse(const SpGL21& l);

struct ThreePointSolution {
  SpGL21 map;
  GrassmannNumber epsilon;
  int branch = +1;
};

/// Constructive three-point transitivity: produces L in SpGL(2|1) and an
/// odd epsilon with  act(L, 0) = p1,  act(L, 1_eps) = p2,  act(L, inf) = p3.
/// The two branch signs yield maps differing by precomposition with Xi_-
/// and epsilon by a sign. Requires pairwise distinct reduced points.
ThreePointSolution solve_three_points(const ProjectivePoint& p1, const ProjectivePoint& p2,
                                      const ProjectivePoint& p3, int branch = +1);

/// The odd invariant of a triple, defined up to sign; returned as {eps, -eps}.
std::pair<GrassmannNumber, GrassmannNumber> pseudoinvariant(const ProjectivePoint& p1,
                                                            const ProjectivePoint& p2,
                                                            const ProjectivePoint& p3);

enum class FixingClass { Identity, XiMinus, NotFixing };

/// Checks whether act(l, .) maps 0 -> 0, 1_eps -> 1_{eps'}, inf -> inf and,
/// if so, whether l is projectively the identity or Xi_-.
FixingClass classify_fixing(const SpGL21& l, const GrassmannNumber& eps,
                            const GrassmannNumber& eps_prime, double tol = 1e-8);

}  // namespace supermoduli
