// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "nfsg/rng.hpp"

namespace nfsg {

// One sector of a circular cell served by a BS at the origin.
struct SectorGeometry {
    int n_sectors = 3;          // N_s
    double cell_radius = 150.0; // R_c [m]
    double los_radius = 150.0;  // R_L [m], only checked against R_c

    // Throws InvalidArgument on a violated invariant.
    void validate() const;
    double half_width() const; // pi / N_s
};

struct PolarPoint {
    double theta = 0.0; // [rad]
    double r = 0.0;     // [m]
};

struct OrderedUserSet {
    std::vector<PolarPoint> users; // ascending in r
    int n_active() const { return static_cast<int>(users.size()); }
};

struct CdfPdf {
    double cdf;
    double pdf;
};

enum class Side { inner, outer };

bool in_sector(const PolarPoint& p, const SectorGeometry& sector);

// Sort ascending by distance; ties by angle, then by original index.
void sort_by_distance(std::vector<PolarPoint>& pts);

OrderedUserSet sample_user_set(const SectorGeometry& sector, int n_active, RandomStream& rng);

// Anchor at position kappa (1-based); kappa-1 inner users and n_active-kappa outer users.
OrderedUserSet sample_conditional_user_set(int kappa, const PolarPoint& anchor, int n_active,
                                           const SectorGeometry& sector, RandomStream& rng);

CdfPdf unordered_distance_dist(double r, const SectorGeometry& sector);

// Distance of the kappa-th closest of n_active users.
CdfPdf ordered_distance_dist(int kappa, double r, int n_active, const SectorGeometry& sector);

// Distance of an inner (r < r_kappa) or outer (r >= r_kappa) user given r_kappa.
CdfPdf conditional_distance_dist(Side side, double r, double r_kappa, const SectorGeometry& sector);

// Spatial angle vartheta = sin(theta)/2 of a user uniform in the sector.
CdfPdf spatial_angle_dist(double vartheta, const SectorGeometry& sector);

// Spatial-angle CDF extended by 0 below and 1 above the support.
double spatial_angle_cdf_clamped(double vartheta, const SectorGeometry& sector);

} // namespace nfsg
