#pragma once

#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rtorsion/chain.hpp"
#include "rtorsion/cwmodel.hpp"
#include "rtorsion/repspace.hpp"
#include "rtorsion/su2.hpp"

namespace rtorsion {

/// Representative h of the class in H^2(E; Ad rho) dual to the meridian
/// axis: the restriction to the torus 2-cell, cup-paired with P and
/// evaluated on the fundamental cell, gives killing(P, P) = 1.
struct ReferenceClass {
  std::vector<Su2Vector> cochain;     // one value per 2-cell of E
  std::vector<Su2Vector> functional;  // g with pairing(h) = sum_i <g_i, h_i>
  Su2Vector axis;                     // unit axis P of rho(mu)
  double pairing = 0.0;
};

/// Throws CentralMuImage, DegenerateRestriction.
ReferenceClass compute_h_rho(const CWPairModel& m, std::span<const SU2Element> rho);

struct TauOptions {
  LiftChoice lifts;                                 // empty: the model's lifts
  Eigen::Matrix3d basis = Eigen::Matrix3d::Identity();  // su(2) basis as columns
  std::mt19937_64* rng = nullptr;                   // randomizes the b_i choices
};

/// tau_[rho](v) for a cocycle v given on the model's lifts of the 1-cells.
/// Throws NotRegular when H^*(E; Ad rho) is not (0, 1, 1) and ZeroClass for
/// a nonzero coboundary.
double tau_eval(const CWPairModel& m, std::span<const SU2Element> rho, std::span<const Su2Vector> v,
                const TauOptions& opts = {});

struct MetrizedSample {
  RepPoint point;
  double tau = 0.0;    // tau(unit forward chart tangent)
  double s = 0.0;      // arc length along the traced order
  double sigma = 0.0;  // arc length along the positive orientation
};

struct MetrizedCircle {
  std::vector<MetrizedSample> samples;
  double total = 0.0;
  int orientation = 1;  // sign of tau along the traced order
  double volume_error = 0.0;
  bool closed = false;
};

struct MetrizeOptions {
  bool midpoints = true;  // add a midpoint per segment and extrapolate the trapezoid rule
};

/// Trapezoid rule for |tau| in the slice parameter <q - p, T_p> of each
/// segment. Throws NonRegularSample when tau vanishes or changes sign.
MetrizedCircle metrize(const CWPairModel& m, const RepSpace& rs, const CircleTrace& trace,
                       const MetrizeOptions& opts = {});

}  // namespace rtorsion
