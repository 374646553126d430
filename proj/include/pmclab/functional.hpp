#pragma once

#include "pmclab/geometry.hpp"
#include "pmclab/metric.hpp"
#include "pmclab/prescription.hpp"

#include <functional>

namespace pmclab {

struct EnergyBreakdown {
  double area = 0.0;
  double prescription_term = 0.0;
  double total() const { return area - prescription_term; }
};

// Exact derivative of the discrete energy with respect to every degree of
// freedom (log-radii and center). The norm is the grid-weighted L2 norm of
// the gradient density plus the center part.
struct ShapeGradient {
  Eigen::ArrayXd field;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double norm = 0.0;
};

// A^h(Omega) = Area_g(boundary) - int_Omega h dVol_g.
EnergyBreakdown energy(const StarRegion& region, const Prescription& p,
                       const Metric& metric = Metric::flat());

ShapeGradient shape_gradient(const StarRegion& region, const Prescription& p,
                             const Metric& metric = Metric::flat());

// Scalar mean curvature diagnostic: area-gradient density over the volume
// element density. Outward-normal convention; the unit sphere gives 2.
Eigen::ArrayXd mean_curvature_field(const StarRegion& region,
                                    const Metric& metric = Metric::flat());

using VectorField = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;

// delta A^h(X) = int_{dOmega} (H - h) X.n dA (flat metric).
double first_variation(const StarRegion& region, const Prescription& p,
                       const VectorField& X);

// d/ds|_{s=1} A^h(s Omega) = n Area(dOmega) - int_Omega ((n+1) h + grad h . x),
// homothety about the origin. Matches finite differences of
// s -> energy(scale(region, s)) to quadrature exactness.
double homothety_derivative(const StarRegion& region, const Prescription& p);

// d/dt|_{t=0} A^h(Omega + t e) = -int_Omega grad h . e.
double translation_derivative(const StarRegion& region, const Prescription& p,
                              const Eigen::Vector3d& direction);

// int_Omega |zeta'(|x| - R)| h: how much of the region sits in the cutoff
// shell, weighted by the untruncated prescription.
double transition_mass(const StarRegion& region,
                       const TruncatedPrescription& hr);

struct IsoperimetricCertificate {
  double volume_threshold = 0.0;  // v
  double barrier = 0.0;           // a, with A^h >= a on {Vol = v}
};

// Sharp-constant certificate for n = 2: with C = (36 pi)^{1/3},
// v = (2C / 3M)^3 and a = 4 C^3 / (27 M^2). Any mountain pass path crosses
// {Vol = v}, so omega >= a.
IsoperimetricCertificate isoperimetric_certificate(int n, double sup_h);

// Exact second derivative of the discrete energy with respect to the
// log-radius DOFs, flat metric. Dense symmetric matrix.
Eigen::MatrixXd field_hessian(const StarRegion& region, const Prescription& p);

}  // namespace pmclab
