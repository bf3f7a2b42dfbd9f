#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace s2v {

struct MdsResult {
  Eigen::MatrixXd coords;        // n x 2, zero centroid, sign-canonical axes
  bool clamped_negative = false; // some eigenvalue < 0 was clamped to zero
};

/// Classical MDS to 2-D: double-center the squared-distance matrix, take the
/// top-2 eigenpairs (cyclic Jacobi sweeps, off-diagonal threshold 1e-12
/// relative to the Frobenius norm, 100-sweep cap), scale eigenvectors by
/// sqrt of the eigenvalues clamped at zero. Coordinates are re-centered to
/// an exactly zero mean and each axis is flipped so its largest-magnitude
/// entry is positive, so repeated runs are bit-identical.
///
/// Throws TooFewPoints for n < 3 and InvalidDistances for an asymmetric,
/// negative, or nonzero-diagonal matrix.
MdsResult classical_mds(const Eigen::MatrixXd& distances);

/// Same, but from a row-per-point coordinate matrix (Euclidean distances).
MdsResult classical_mds_points(const Eigen::MatrixXd& points);

/// Labeled 2-D layout for serialization.
struct Mds2D {
  std::vector<std::pair<std::string, std::size_t>> labels;  // (word, occurrence id)
  MdsResult result;
};

/// CSV: label,occurrence_id,x,y (shortest round-trip floats).
void write_mds_csv(const Mds2D& mds, std::ostream& out);

}  // namespace s2v
