#pragma once

// Metric-free combinatorics: cell complexes of spectral elements and the
// incidence matrices that act as the exterior derivative on cochains.
//
// Orientation: 1D cells point in +xi, x-edges in +x, y-edges in +y, faces
// are counter-clockwise. Global numbering is first-encounter order over
// (element_y, element_x, local_y, local_x); x-edges precede y-edges.

#include <Eigen/Sparse>
#include <span>
#include <vector>

namespace mse {

/// Sparse {-1, 0, +1} matrix mapping k-cochains to (k+1)-cochains.
class IncidenceMatrix {
 public:
  using Storage = Eigen::SparseMatrix<int, Eigen::RowMajor>;

  IncidenceMatrix() = default;
  explicit IncidenceMatrix(Storage m);

  Eigen::Index rows() const noexcept { return m_.rows(); }
  Eigen::Index cols() const noexcept { return m_.cols(); }
  const Storage& matrix() const noexcept { return m_; }
  Eigen::SparseMatrix<double, Eigen::RowMajor> to_double() const;

  /// Integer product; composition of incidence matrices stays exact.
  friend Storage operator*(const IncidenceMatrix& a, const IncidenceMatrix& b);

 private:
  Storage m_;
};

/// Periodic or bounded chain of 1D spectral elements of order p.
class CellComplex1D {
 public:
  CellComplex1D(int nx, int p, bool periodic);

  int nx() const noexcept { return nx_; }
  int order() const noexcept { return p_; }
  bool periodic() const noexcept { return periodic_; }
  int node_count() const noexcept { return periodic_ ? nx_ * p_ : nx_ * p_ + 1; }
  int edge_count() const noexcept { return nx_ * p_; }

  /// Local node i in [0, p] of element e.
  int node_index(int e, int i) const noexcept;
  /// Local edge i in [1, p] of element e.
  int edge_index(int e, int i) const noexcept { return e * p_ + (i - 1); }

 private:
  int nx_, p_;
  bool periodic_;
};

/// Tensor-product complex of nx * ny quadrilateral elements of order p.
class CellComplex2D {
 public:
  CellComplex2D(int nx, int ny, int p, bool periodic_x, bool periodic_y);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int order() const noexcept { return p_; }
  int element_count() const noexcept { return nx_ * ny_; }
  bool periodic_x() const noexcept { return periodic_x_; }
  bool periodic_y() const noexcept { return periodic_y_; }

  int node_count() const noexcept { return n_nodes_; }
  int xedge_count() const noexcept { return n_xedges_; }
  int edge_count() const noexcept { return n_xedges_ + n_yedges_; }
  int face_count() const noexcept { return element_count() * p_ * p_; }
  int cell_count(int degree) const;

  // Per element local counts.
  int local_nodes() const noexcept { return (p_ + 1) * (p_ + 1); }
  int local_edges() const noexcept { return 2 * p_ * (p_ + 1); }
  int local_faces() const noexcept { return p_ * p_; }

  int element(int ex, int ey) const noexcept { return ey * nx_ + ex; }

  // Local numbering inside one element:
  //   node (i, j), i, j in [0, p]        -> j (p+1) + i
  //   x-edge (i, j), i in [1, p], j in [0, p] -> j p + (i - 1)
  //   y-edge (i, j), i in [0, p], j in [1, p] -> p (p+1) + (j - 1)(p+1) + i
  //   face (i, j), i, j in [1, p]        -> (j - 1) p + (i - 1)
  int local_node(int i, int j) const noexcept { return j * (p_ + 1) + i; }
  int local_xedge(int i, int j) const noexcept { return j * p_ + (i - 1); }
  int local_yedge(int i, int j) const noexcept { return p_ * (p_ + 1) + (j - 1) * (p_ + 1) + i; }
  int local_face(int i, int j) const noexcept { return (j - 1) * p_ + (i - 1); }

  std::span<const int> element_nodes(int e) const noexcept;
  std::span<const int> element_edges(int e) const noexcept;
  std::span<const int> element_faces(int e) const noexcept;

  int node_index(int e, int i, int j) const noexcept { return element_nodes(e)[local_node(i, j)]; }
  int xedge_index(int e, int i, int j) const noexcept { return element_edges(e)[local_xedge(i, j)]; }
  int yedge_index(int e, int i, int j) const noexcept { return element_edges(e)[local_yedge(i, j)]; }
  int face_index(int e, int i, int j) const noexcept { return element_faces(e)[local_face(i, j)]; }

 private:
  int nx_, ny_, p_;
  bool periodic_x_, periodic_y_;
  int n_nodes_{0}, n_xedges_{0}, n_yedges_{0};
  std::vector<int> node_map_, edge_map_, face_map_;
};

/// Single-element 1D incidence matrix, p x (p + 1).
IncidenceMatrix incidence_1_0(int p);
IncidenceMatrix incidence_1_0(const CellComplex1D& complex);
IncidenceMatrix incidence_1_0(const CellComplex2D& complex);
IncidenceMatrix incidence_2_1(const CellComplex2D& complex);

/// Element-local 2D incidence of one element (faces x local edges).
IncidenceMatrix local_incidence_2_1(int p);

Eigen::VectorXd apply_incidence(const IncidenceMatrix& e, const Eigen::VectorXd& cochain);

}  // namespace mse
