#pragma once

#include <functional>
#include <vector>

#include "supermoduli/superlinalg.hpp"

namespace supermoduli {

/// Christoffel symbols Gamma^A_{DE}(x) on R^{m|2n}, with x the full
/// coordinate tuple (even slots first). The symbols must satisfy the
/// graded symmetry Gamma^A_{DE} = (-1)^{|D||E|} Gamma^A_{ED} and have
/// parity |A|+|D|+|E|.
struct ChristoffelSource {
  SDim dims;
  int s = 0;
  std::function<GrassmannNumber(int A, int D, int E, const std::vector<GrassmannNumber>& x)> gamma;
};

/// Metric of the restricted block form g_even(x) + constant odd block J0;
/// the even block depends on even coordinates only.
struct MetricSource {
  SDim dims;
  int s = 0;
  std::function<GrassmannNumber(int a, int b, const std::vector<GrassmannNumber>& x)> even_block;
  std::vector<std::vector<double>> odd_block;  // antisymmetric, dims.odd square
};

ChristoffelSource flat_source(SDim dims, int s);
/// Unit round 2-sphere in the stereographic chart, flat odd directions.
ChristoffelSource sphere_source(int s, int odd_dims = 2);
MetricSource flat_metric(SDim dims, int s);
MetricSource sphere_metric(int s, int odd_dims = 2);

/// Christoffel symbols of a restricted-form metric via the classical
/// Koszul formula on the even block (central finite differences); odd-index
/// symbols vanish because the odd block is constant.
ChristoffelSource from_even_metric(const MetricSource& metric, double fd_step = 1e-5);

/// Largest graded-symmetry violation of the symbols on the samples.
double gamma_symmetry_residual(const ChristoffelSource& src,
                               const std::vector<std::vector<GrassmannNumber>>& sample_points);

struct GeodesicSolution {
  SuperVector p, v;
  double step_size = 0.0;
  std::vector<double> t_samples;          // increasing, covering [-T, T]
  std::vector<SuperVector> positions;
  std::vector<SuperVector> velocities;

  int index_of_time(double t) const;      // nearest sample index
};

/// RK4 integration of the super geodesic equation
///   gamma''^A + gamma'^E gamma'^D Gamma^A_{DE}(gamma) = 0
/// over Lambda_s-valued state on [-T, T]. Aborts with std::domain_error
/// when the reduced trajectory blows up.
GeodesicSolution integrate_geodesic(const ChristoffelSource& src, const SuperVector& p,
                                    const SuperVector& v, double T, double step);

/// m(gamma', gamma') per sample; constancy is the arc-length property.
std::vector<GrassmannNumber> speed_norm(const GeodesicSolution& sol, const MetricSource& metric);

/// Max coefficientwise deviation between gamma_{p, lambda v}(t) and
/// gamma_{p, v}(lambda t).
double rescale_check(const ChristoffelSource& src, const SuperVector& p, const SuperVector& v,
                     double lambda, double t, double step = 1e-3);

/// Time-1 geodesic flow from p.
SuperVector exp_map(const ChristoffelSource& src, const SuperVector& p, const SuperVector& v,
                    double step = 1e-3);

/// First-order probe of d(exp_p) = id: compares (exp_p(h e_A) - p)/h to
/// e_A per basis direction; odd directions are probed with coefficient
/// h eta_1 since a bare real step would violate parity.
double exp_differential_check(const ChristoffelSource& src, const SuperVector& p, double h,
                              double step = 1e-3);

}  // namespace supermoduli
