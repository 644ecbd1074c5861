#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "margulis/envelope.hpp"

namespace margulis {

/// A point (r, theta, z, t) of the upper half-space model of H^4, with
/// (r, theta, z) cylindrical coordinates of R^3, theta measured in full
/// turns (mod 1), and t > 0.
struct Point4 {
    Ival r, theta, z, t;

    static Point4 at(double r, double theta, double z, double t, mpfr_prec_t bits = 128);
};

/// Hyperbolic distance from cosh(rho) = 1 + |x - y|^2 / (2 t t'), with the
/// theta chord 4 r r' sin^2(pi dtheta) through the cylindrical embedding.
Ival hyp_distance(const Point4& x, const Point4& y);

/// The screw translation g_alpha^j: (r, theta, z, t) -> (r, theta + j alpha, z + j, t).
Point4 apply_screw(const Angle& alpha, const mpz_class& j, const Point4& x);

enum class RegionSide { Inside, Outside, Undetermined };

struct Displacement {
    Ival rho;                // rho(g^j x, x) from the closed identity
    Ival cosh_minus_1;       // (4 sin^2(pi j alpha) r^2 + j^2)/(2 t^2)
    RegionSide in_region;    // certified t > u_j(r) / t < u_j(r)
};

/// Displacement of x under g_alpha^j and membership in T_{alpha,j}.
Displacement displacement(const BoundaryContext& ctx, const mpz_class& j, const Point4& x);

struct LeafVolume {
    Ival volume;       // pi (B^{-1}(t))^2 / t^3
    Ival core_length;  // 1/t
    Ival radius;       // B^{-1}(t)
};

/// Volume of the leaf L_t of the horizontal foliation of the cusp.
LeafVolume leaf_volume(const BoundaryContext& ctx, const EnvelopeProfile& prof, const Ival& t);

/// The model conjugacy phi: T_alpha -> T_beta,
/// (r, theta, z, t) -> (r, theta + (beta - alpha) z, z, t + B_beta(r) - B_alpha(r)).
/// Requires x in T_alpha (certified B_alpha(r) < t).
Point4 conjugacy_phi(const BoundaryContext& ctx_alpha, const EnvelopeProfile& prof_alpha,
                     const BoundaryContext& ctx_beta, const EnvelopeProfile& prof_beta,
                     const Point4& x);

struct WitnessPair {
    mpz_class n;      // the index n_i
    Ival norm_alpha;  // ||n_i alpha||
    Ival norm_beta;   // ||n_i beta||
};

struct WitnessSequence {
    std::vector<WitnessPair> pairs;
    Ival floor_beta;  // min of norm_beta over the selected pairs
};

/// Bounded search for a sequence with ||n_i alpha|| -> 0 while ||n_i beta||
/// stays above a reported floor; candidates are the closest-return moments
/// q_n(alpha). Honest reporting: the floor is the best achieved within the
/// cap, not a proven limit.
WitnessSequence rigidity_witness(const Angle& alpha, const Angle& beta, std::size_t count,
                                 const mpz_class& search_cap, PrecisionPolicy pol = {});

/// Displacement diagnostic of the rigidity proof at a probe on the boundary
/// of T_{beta,1}: cosh rho(g_beta^n y, y) - 1 and its certified lower bound
/// 4 sin^2(pi n beta) r^2 / (2 t^2).
struct RigidityProbe {
    mpz_class n;
    Ival cosh_minus_1;
    Ival lower_bound;
};
RigidityProbe rigidity_probe(const BoundaryContext& ctx_beta, const mpz_class& n, double r);

}  // namespace margulis
