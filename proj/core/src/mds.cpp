#include "s2v/mds.hpp"

#include <cmath>
#include <ostream>

#include "s2v/errors.hpp"
#include "s2v/text.hpp"

namespace s2v {

namespace {

// One cyclic Jacobi pass over all (p,q) pairs. Returns the largest
// off-diagonal magnitude seen before rotating.
double jacobi_sweep(Eigen::MatrixXd& a, Eigen::MatrixXd& v, double threshold) {
  const auto n = a.rows();
  double max_off = 0.0;
  for (Eigen::Index p = 0; p < n - 1; ++p) {
    for (Eigen::Index q = p + 1; q < n; ++q) {
      const double apq = a(p, q);
      max_off = std::max(max_off, std::abs(apq));
      if (std::abs(apq) <= threshold) continue;
      const double app = a(p, p);
      const double aqq = a(q, q);
      const double tau = (aqq - app) / (2.0 * apq);
      const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                       (std::abs(tau) + std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      for (Eigen::Index k = 0; k < n; ++k) {
        const double akp = a(k, p);
        const double akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
      }
      for (Eigen::Index k = 0; k < n; ++k) {
        const double apk = a(p, k);
        const double aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
      }
      for (Eigen::Index k = 0; k < n; ++k) {
        const double vkp = v(k, p);
        const double vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
      }
    }
  }
  return max_off;
}

void validate_distances(const Eigen::MatrixXd& d) {
  if (d.rows() != d.cols()) throw InvalidDistances("distance matrix must be square");
  if (d.rows() < 3) {
    throw TooFewPoints("need at least 3 points, got " + std::to_string(d.rows()));
  }
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    if (d(i, i) != 0.0) throw InvalidDistances("nonzero diagonal entry");
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
      if (d(i, j) < 0.0 || d(j, i) < 0.0) throw InvalidDistances("negative distance");
      if (d(i, j) != d(j, i)) throw InvalidDistances("asymmetric distance matrix");
    }
  }
}

}  // namespace

MdsResult classical_mds(const Eigen::MatrixXd& distances) {
  validate_distances(distances);
  const auto n = distances.rows();

  // B = -1/2 J D^2 J, computed entrywise from row/column/grand means.
  Eigen::MatrixXd d2 = distances.array().square();
  Eigen::VectorXd row_mean = d2.rowwise().mean();
  const double grand_mean = d2.mean();
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      b(i, j) = -0.5 * (d2(i, j) - row_mean(i) - row_mean(j) + grand_mean);
    }
  }

  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double threshold = 1e-12 * std::max(1.0, b.norm());
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (jacobi_sweep(b, v, threshold) <= threshold) break;
  }

  // Top-2 eigenpairs by eigenvalue, index order breaking ties.
  std::array<Eigen::Index, 2> top = {0, 0};
  for (int slot = 0; slot < 2; ++slot) {
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (slot == 1 && i == top[0]) continue;
      if (best < 0 || b(i, i) > b(best, best)) best = i;
    }
    top[slot] = best;
  }

  MdsResult result;
  result.coords.resize(n, 2);
  for (int axis = 0; axis < 2; ++axis) {
    double lambda = b(top[axis], top[axis]);
    if (lambda < 0.0) {
      result.clamped_negative = true;
      lambda = 0.0;
    }
    result.coords.col(axis) = v.col(top[axis]) * std::sqrt(lambda);
  }

  // Exact zero centroid, then canonical sign per axis.
  for (int axis = 0; axis < 2; ++axis) {
    result.coords.col(axis).array() -= result.coords.col(axis).mean();
    Eigen::Index largest = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (std::abs(result.coords(i, axis)) > std::abs(result.coords(largest, axis))) {
        largest = i;
      }
    }
    if (result.coords(largest, axis) < 0.0) result.coords.col(axis) = -result.coords.col(axis);
  }
  return result;
}

MdsResult classical_mds_points(const Eigen::MatrixXd& points) {
  if (points.rows() < 3) {
    throw TooFewPoints("need at least 3 points, got " + std::to_string(points.rows()));
  }
  const auto n = points.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (points.row(i) - points.row(j)).norm();
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return classical_mds(d);
}

void write_mds_csv(const Mds2D& mds, std::ostream& out) {
  out << "label,occurrence_id,x,y\n";
  for (std::size_t i = 0; i < mds.labels.size(); ++i) {
    out << mds.labels[i].first << ',' << mds.labels[i].second << ','
        << format_double(mds.result.coords(static_cast<Eigen::Index>(i), 0)) << ','
        << format_double(mds.result.coords(static_cast<Eigen::Index>(i), 1)) << '\n';
  }
}

}  // namespace s2v
