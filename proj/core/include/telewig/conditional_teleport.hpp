#pragma once

// Post-selected teleportation with a pure EPR resource (lambda = tanh r).
// Outcomes are accepted when beta = (x_u + i p_v) / sqrt(2) lies in a disk of
// radius K about the origin; all radii here are in beta units.

namespace telewig {

struct DiskRegion {
  double radius;

  explicit DiskRegion(double k);
};

/// a_cond = (1 - lambda^2) + 2 (G - lambda)^2, the Gaussian rate of the
/// parity-weighted outcome density.
double cond_exponent(double lambda, double gain);

/// P = 1 - [1 + (1 - lambda^2)^2 K^2] exp(-(1 - lambda^2) K^2); gain independent.
double success_prob_disk(double lambda, const DiskRegion& disk);

/// Wigner origin of the accepted Fock-state output, from the parity
/// expectation integrated over the disk.
double origin_disk_fock1(double lambda, double gain, const DiskRegion& disk);

double success_prob_disk_attenuated(double lambda, const DiskRegion& disk, double eta);
double origin_disk_attenuated(double lambda, double gain, const DiskRegion& disk, double eta);

/// K -> 0 limit: (1/pi) (1 - eta - eta lambda^2) / (1 - eta + eta lambda^2).
double origin_pointlimit_attenuated(double lambda, double eta);

/// First-order expansion of the point limit about lambda = 1.
double pointlimit_expansion(double lambda, double eta);

struct ConditionalOptimum {
  double gain;
  double origin;
  double success;
};

/// Gain minimizing the accepted-state origin, searched on (0, 2).
ConditionalOptimum optimize_disk(double lambda, const DiskRegion& disk, double eta = 1.0);

/// Squeezing parameter r at which the gain-optimized accepted origin changes
/// sign for the attenuated input.
double threshold_disk_r(double eta, const DiskRegion& disk);

}  // namespace telewig
