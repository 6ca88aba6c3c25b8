#pragma once

#include <cstdint>
#include <vector>

#include "polyint/bodies.hpp"
#include "polyint/linalg.hpp"

namespace polyint {

/// \tilde V_i(K) = (1/n) \int_{S^{n-1}} rho_K^i, 0 <= i <= n. Polytopes use the
/// exact facet decomposition, other bodies a sphere rule of `degree` (reduced
/// to a symmetry chamber or orthant when the body has coordinate symmetries).
double dual_volume(const Body& body, int i, int degree = 24);

enum class SectionMethod {
  Auto,     // Exact for polytopes; Uniform at twice the degree for points with
            // gauge below 2/3; Focused otherwise
  Focused,  // polar rule graded toward the nearest boundary direction
  Uniform,  // plain sub-sphere product rule
  Exact,    // facet decomposition; polytopes only
};

struct SectionOptions {
  int degree = 24;          // sphere-rule degree for the smooth paths
  int polytope_order = 10;  // Gauss points per polar angle on the exact path
  SectionMethod method = SectionMethod::Auto;
};

/// Open interval (-rho_K(-xi), rho_K(xi)) of admissible offsets.
struct OffsetInterval {
  double lo = 0.0;
  double hi = 0.0;
};
OffsetInterval admissible_interval(const Body& body, const Direction& xi);

/// A_{K,m,xi}(t) = (1/(n-1)) \int_{S^{n-1} ∩ xi^perp} rho_{K - t xi}^m.
/// Throws PointNotInterior unless t xi is interior, OrderOutOfRange unless
/// 1 <= m <= n-1.
double section_dual_volume(const Body& body, int m, const Direction& xi, double t,
                           const SectionOptions& opt = {});

struct SectionFunctionSamples {
  Direction xi;
  int m = 0;
  double lo = 0.0;  // sampled interval, inside the admissible one
  double hi = 0.0;
  std::vector<double> t;  // increasing Chebyshev nodes on [lo, hi]
  std::vector<double> values;
};

/// Samples on Chebyshev nodes of [lo + delta, hi - delta] with
/// delta = margin * min_radial. grid_size >= 8.
SectionFunctionSamples section_function(const Body& body, int m, const Direction& xi,
                                        int grid_size = 64, double margin = 1e-3,
                                        const SectionOptions& opt = {}, int threads = 1);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = \int_{S^{n-1}} A_{K,m,xi}(t) dxi by a sphere rule of `outer_degree`
/// over xi; rhs = kappa_{n-1} \int_{S^{n-1}} (rho_K^2 - t^2)^{m/2} with a rule
/// of twice that degree. Bodies invariant under coordinate sign changes (and
/// permutations) integrate over one orthant (chamber) only; for symmetric
/// polytopes the chamber rule is also split where A has kinks, i.e. where
/// the hyperplane meets a vertex. Needs |t| < min_radial (TOutOfRange).
IdentityCheck moment_identity_check(const Body& body, int m, double t, int outer_degree = 24,
                                    const SectionOptions& inner = {}, int threads = 0);

struct SteinerReport {
  std::vector<double> eps;
  std::vector<double> volumes;       // V_n of the radial sum K + eps B
  std::vector<double> coefficients;  // least-squares fit, ascending powers of eps
  std::vector<double> targets;       // C(n, i) \tilde W_i(K) = C(n, i) \tilde V_{n-i}(K)
  double residual = 0.0;             // RMS misfit / RMS volume
};

/// Needs at least n + 1 distinct positive eps values.
SteinerReport dual_steiner_check(const Body& body, const std::vector<double>& eps_grid,
                                 int degree = 24);

struct KubotaCheck {
  double lhs = 0.0;  // \tilde V_i(K)
  double rhs = 0.0;  // Monte-Carlo mean of (kappa_n / kappa_i) V_i(K ∩ H)
  double std_error = 0.0;
};

/// 1 <= i <= n-1; frames from haar_frame(n, i, seed, k), k < samples.
KubotaCheck dual_kubota_check(const Body& body, int i, int samples, std::uint64_t seed,
                              int degree = 24, int threads = 0);

/// Fractional derivative of t -> A_{K,m,xi}(t) on [0, rho_K(xi)) at 0, with
/// Taylor coefficients from a Chebyshev fit around 0. Integer q takes the
/// ordinary-derivative path.
double frac_deriv_of_section(const Body& body, int m, const Direction& xi, double q,
                             const SectionOptions& opt = {});

}  // namespace polyint
