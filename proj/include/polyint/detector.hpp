#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyint/bodies.hpp"
#include "polyint/sections.hpp"

namespace polyint {

struct DetectionConfig {
  int max_degree = 16;       // N_max, below grid_size
  int grid_size = 64;
  double margin = 1e-3;      // endpoint margin, in units of min_radial
  double threshold = 1e-6;   // relative residual accepted as polynomial
  int directions = 40;       // ensemble size, axes and diagonal included
  std::uint64_t seed = 1;
  // Degree 48 keeps quadrature noise near 1e-12, far below the threshold,
  // also for offsets close to the boundary.
  SectionOptions section = [] {
    SectionOptions o;
    o.degree = 48;
    return o;
  }();
  int threads = 0;           // 0 = default_threads()
};

struct PolynomialFitReport {
  Vec xi;
  int degree = 0;
  std::vector<double> coefficients;  // a_0..a_degree in powers of t
  double residual = 0.0;             // RMS misfit / RMS value
  bool polynomial = false;
};

/// Least squares in the Chebyshev basis of [samples.lo, samples.hi].
/// DegenerateGrid unless 0 <= degree < number of samples. `polynomial`
/// is left false; detect_direction sets it against its threshold.
PolynomialFitReport fit_polynomial(const SectionFunctionSamples& samples, int degree);

/// Sweeps degrees 0..max_degree and keeps the first fit whose residual is
/// within the threshold; otherwise the max_degree fit, non-polynomial.
PolynomialFitReport detect_direction(const Body& body, int m, const Direction& xi,
                                     const DetectionConfig& config = {});

/// Coordinate axes, the normalized all-ones vector, then seeded Haar
/// directions up to `count` (never fewer than n + 1 in total).
std::vector<Direction> direction_ensemble(int n, int count, std::uint64_t seed);

struct EllipsoidFit {
  Mat q;                       // fitted symmetric form
  double residual = 0.0;       // relative weighted RMS of rho^{-2} - theta^T Q theta
  bool positive_definite = false;
};

/// Least-squares quadratic form through rho_K(theta)^{-2} on a sphere rule.
/// Zero residual singles out origin-centered ellipsoids.
EllipsoidFit ellipsoid_fit(const Body& body, int degree = 12);

struct ClassificationReport {
  int m = 0;
  std::vector<PolynomialFitReport> per_direction;
  bool polynomial = false;  // every direction polynomial
  int degree_bound = -1;    // max per-direction degree when polynomial
  EllipsoidFit ellipsoid;
};

/// OrderOutOfRange unless 1 <= m <= n-1.
ClassificationReport detect_body(const Body& body, int m, const DetectionConfig& config = {});

struct CorpusEntry {
  std::string name;
  Body body;
  bool is_ellipsoid = false;
};

/// Ball, three seeded random origin-centered ellipsoids, the p = 4 ball,
/// the cube and a seeded random polytope with 12 facets, all in R^n.
/// The ellipsoids are axis-aligned: offsets are sampled only while t xi is
/// inside the body, i.e. up to rho(xi), and the odd-m singularity of the
/// section function sits at the support value h(xi) >= rho(xi). Only along
/// principal axes do the two agree, and the coordinate axes of the direction
/// ensemble are then principal axes.
std::vector<CorpusEntry> detector_corpus(int n, std::uint64_t seed = 2024);

}  // namespace polyint
