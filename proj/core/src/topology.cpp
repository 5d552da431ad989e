#include "mse/topology.hpp"

#include <string>
#include <unordered_map>

#include "mse/errors.hpp"

namespace mse {
namespace {

using Triplet = Eigen::Triplet<int>;

IncidenceMatrix::Storage from_triplets(Eigen::Index rows, Eigen::Index cols,
                                       const std::vector<Triplet>& t) {
  IncidenceMatrix::Storage m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  // Periodic identification of a cell with itself cancels to zero.
  m.prune(0);
  m.makeCompressed();
  return m;
}

// Assigns global indices to structured keys in first-encounter order.
class Numbering {
 public:
  int operator()(long key) {
    auto [it, inserted] = ids_.try_emplace(key, next_);
    if (inserted) ++next_;
    return it->second;
  }
  int size() const noexcept { return next_; }

 private:
  std::unordered_map<long, int> ids_;
  int next_{0};
};

}  // namespace

IncidenceMatrix::IncidenceMatrix(Storage m) : m_(std::move(m)) {}

Eigen::SparseMatrix<double, Eigen::RowMajor> IncidenceMatrix::to_double() const {
  return m_.cast<double>();
}

IncidenceMatrix::Storage operator*(const IncidenceMatrix& a, const IncidenceMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("incidence composition");
  IncidenceMatrix::Storage c = a.m_ * b.m_;
  c.prune(0);
  return c;
}

// --- 1D ---------------------------------------------------------------------

CellComplex1D::CellComplex1D(int nx, int p, bool periodic) : nx_(nx), p_(p), periodic_(periodic) {
  if (nx < 1) throw InvalidArgument("CellComplex1D needs nx >= 1");
  if (p < 1) throw InvalidOrder("CellComplex1D needs p >= 1");
}

int CellComplex1D::node_index(int e, int i) const noexcept {
  const int g = e * p_ + i;
  return periodic_ ? g % (nx_ * p_) : g;
}

IncidenceMatrix incidence_1_0(int p) {
  if (p < 1) throw InvalidOrder("incidence_1_0 needs p >= 1, got " + std::to_string(p));
  return incidence_1_0(CellComplex1D(1, p, false));
}

IncidenceMatrix incidence_1_0(const CellComplex1D& c) {
  std::vector<Triplet> t;
  t.reserve(2 * c.edge_count());
  for (int e = 0; e < c.nx(); ++e) {
    for (int i = 1; i <= c.order(); ++i) {
      const int row = c.edge_index(e, i);
      t.emplace_back(row, c.node_index(e, i - 1), -1);
      t.emplace_back(row, c.node_index(e, i), 1);
    }
  }
  return IncidenceMatrix(from_triplets(c.edge_count(), c.node_count(), t));
}

// --- 2D ---------------------------------------------------------------------

CellComplex2D::CellComplex2D(int nx, int ny, int p, bool periodic_x, bool periodic_y)
    : nx_(nx), ny_(ny), p_(p), periodic_x_(periodic_x), periodic_y_(periodic_y) {
  if (nx < 1 || ny < 1) throw InvalidArgument("CellComplex2D needs nx, ny >= 1");
  if (p < 1) throw InvalidOrder("CellComplex2D needs p >= 1");

  // Structured coordinates of lattice points, wrapped where periodic.
  const long gx_n = static_cast<long>(nx_) * p_ + (periodic_x_ ? 0 : 1);
  auto wrap_x = [&](long g) { return periodic_x_ ? g % (static_cast<long>(nx_) * p_) : g; };
  auto wrap_y = [&](long g) { return periodic_y_ ? g % (static_cast<long>(ny_) * p_) : g; };
  auto key = [&](long gx, long gy) { return wrap_y(gy) * (gx_n + 1) + wrap_x(gx); };

  const int ne = element_count();
  node_map_.resize(static_cast<std::size_t>(ne) * local_nodes());
  edge_map_.resize(static_cast<std::size_t>(ne) * local_edges());
  face_map_.resize(static_cast<std::size_t>(ne) * local_faces());

  Numbering nodes, xedges, yedges;
  for (int ey = 0; ey < ny_; ++ey) {
    for (int ex = 0; ex < nx_; ++ex) {
      const int e = element(ex, ey);
      const long ox = static_cast<long>(ex) * p_;
      const long oy = static_cast<long>(ey) * p_;
      int* nm = node_map_.data() + static_cast<std::size_t>(e) * local_nodes();
      int* em = edge_map_.data() + static_cast<std::size_t>(e) * local_edges();
      int* fm = face_map_.data() + static_cast<std::size_t>(e) * local_faces();
      for (int j = 0; j <= p_; ++j) {
        for (int i = 0; i <= p_; ++i) nm[local_node(i, j)] = nodes(key(ox + i, oy + j));
      }
      // x-edge (i, j) is keyed by its right endpoint.
      for (int j = 0; j <= p_; ++j) {
        for (int i = 1; i <= p_; ++i) em[local_xedge(i, j)] = xedges(key(ox + i, oy + j));
      }
      // y-edge (i, j) is keyed by its top endpoint.
      for (int j = 1; j <= p_; ++j) {
        for (int i = 0; i <= p_; ++i) em[local_yedge(i, j)] = yedges(key(ox + i, oy + j));
      }
      for (int j = 1; j <= p_; ++j) {
        for (int i = 1; i <= p_; ++i) {
          fm[local_face(i, j)] = e * local_faces() + local_face(i, j);
        }
      }
    }
  }
  n_nodes_ = nodes.size();
  n_xedges_ = xedges.size();
  n_yedges_ = yedges.size();
  // y-edges follow the whole x-edge family.
  for (int e = 0; e < ne; ++e) {
    int* em = edge_map_.data() + static_cast<std::size_t>(e) * local_edges();
    for (int j = 1; j <= p_; ++j) {
      for (int i = 0; i <= p_; ++i) em[local_yedge(i, j)] += n_xedges_;
    }
  }
}

int CellComplex2D::cell_count(int degree) const {
  switch (degree) {
    case 0:
      return node_count();
    case 1:
      return edge_count();
    case 2:
      return face_count();
    default:
      throw InvalidArgument("cell degree must be 0, 1 or 2, got " + std::to_string(degree));
  }
}

std::span<const int> CellComplex2D::element_nodes(int e) const noexcept {
  return {node_map_.data() + static_cast<std::size_t>(e) * local_nodes(),
          static_cast<std::size_t>(local_nodes())};
}

std::span<const int> CellComplex2D::element_edges(int e) const noexcept {
  return {edge_map_.data() + static_cast<std::size_t>(e) * local_edges(),
          static_cast<std::size_t>(local_edges())};
}

std::span<const int> CellComplex2D::element_faces(int e) const noexcept {
  return {face_map_.data() + static_cast<std::size_t>(e) * local_faces(),
          static_cast<std::size_t>(local_faces())};
}

IncidenceMatrix incidence_1_0(const CellComplex2D& c) {
  const int p = c.order();
  std::vector<Triplet> t;
  std::vector<char> done(c.edge_count(), 0);
  for (int e = 0; e < c.element_count(); ++e) {
    for (int j = 0; j <= p; ++j) {
      for (int i = 1; i <= p; ++i) {
        const int row = c.xedge_index(e, i, j);
        if (done[row]) continue;
        done[row] = 1;
        t.emplace_back(row, c.node_index(e, i - 1, j), -1);
        t.emplace_back(row, c.node_index(e, i, j), 1);
      }
    }
    for (int j = 1; j <= p; ++j) {
      for (int i = 0; i <= p; ++i) {
        const int row = c.yedge_index(e, i, j);
        if (done[row]) continue;
        done[row] = 1;
        t.emplace_back(row, c.node_index(e, i, j - 1), -1);
        t.emplace_back(row, c.node_index(e, i, j), 1);
      }
    }
  }
  return IncidenceMatrix(from_triplets(c.edge_count(), c.node_count(), t));
}

IncidenceMatrix incidence_2_1(const CellComplex2D& c) {
  const int p = c.order();
  std::vector<Triplet> t;
  t.reserve(4 * static_cast<std::size_t>(c.face_count()));
  for (int e = 0; e < c.element_count(); ++e) {
    for (int j = 1; j <= p; ++j) {
      for (int i = 1; i <= p; ++i) {
        const int row = c.face_index(e, i, j);
        t.emplace_back(row, c.xedge_index(e, i, j - 1), 1);   // bottom
        t.emplace_back(row, c.xedge_index(e, i, j), -1);      // top
        t.emplace_back(row, c.yedge_index(e, i - 1, j), -1);  // left
        t.emplace_back(row, c.yedge_index(e, i, j), 1);       // right
      }
    }
  }
  return IncidenceMatrix(from_triplets(c.face_count(), c.edge_count(), t));
}

IncidenceMatrix local_incidence_2_1(int p) {
  const CellComplex2D single(1, 1, p, false, false);
  return incidence_2_1(single);
}

Eigen::VectorXd apply_incidence(const IncidenceMatrix& e, const Eigen::VectorXd& cochain) {
  if (cochain.size() != e.cols()) {
    throw DimensionMismatch("apply_incidence: cochain has " + std::to_string(cochain.size()) +
                            " entries, matrix has " + std::to_string(e.cols()) + " columns");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(e.rows());
  const auto& m = e.matrix();
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    double acc = 0.0;
    for (IncidenceMatrix::Storage::InnerIterator it(m, r); it; ++it) {
      acc += it.value() * cochain[it.col()];
    }
    out[r] = acc;
  }
  return out;
}

}  // namespace mse
