#include "quinpi/linear_solver.hpp"

#include <cmath>

#include "quinpi/errors.hpp"

namespace quinpi {

LinearSolverKind linear_solver_from_string(const std::string& name) {
  if (name == "auto" || name == "automatic") return LinearSolverKind::automatic;
  if (name == "direct") return LinearSolverKind::direct;
  if (name == "gmres") return LinearSolverKind::gmres;
  throw ConfigError("unknown linear solver '" + name + "'");
}

PreconditionerKind preconditioner_from_string(const std::string& name) {
  if (name == "none") return PreconditionerKind::none;
  if (name == "ilu0") return PreconditionerKind::ilu0;
  if (name == "ilu0_compact") return PreconditionerKind::ilu0_compact;
  if (name == "lu_compact") return PreconditionerKind::lu_compact;
  throw ConfigError("unknown preconditioner '" + name + "'");
}

namespace {

// c -= a * b for m x m row-major blocks.
inline void sub_mul(double* c, const double* a, const double* b, int m) {
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      const double aik = a[i * m + k];
      if (aik == 0.0) continue;
      for (int j = 0; j < m; ++j) c[i * m + j] -= aik * b[k * m + j];
    }
}

// y -= a * x
inline void sub_mat_vec(double* y, const double* a, const double* x, int m) {
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) s += a[i * m + k] * x[k];
    y[i] -= s;
  }
}

}  // namespace

void BlockIlu0::factor(const BlockMatrix& a) {
  lu_ = a;
  const BlockPattern& p = lu_.pattern();
  const int m = lu_.m();
  const std::size_t bs = static_cast<std::size_t>(m) * m;
  dinv_.assign(bs * p.n, 0.0);
  std::vector<double> l(bs);
  for (int i = 0; i < p.n; ++i) {
    for (int kk = p.row_ptr[i]; kk < p.diag[i]; ++kk) {
      const int k = p.col[kk];
      // L_ik = A_ik * inv(U_kk)
      double* aik = lu_.block(kk);
      const double* dk = dinv_.data() + bs * k;
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
          double s = 0.0;
          for (int t = 0; t < m; ++t) s += aik[r * m + t] * dk[t * m + c];
          l[r * m + c] = s;
        }
      std::copy(l.begin(), l.end(), aik);
      // A_ij -= L_ik U_kj on the existing pattern.
      int pi = kk + 1;
      int pk = p.diag[k] + 1;
      const int ei = p.row_ptr[i + 1];
      const int ek = p.row_ptr[k + 1];
      while (pi < ei && pk < ek) {
        if (p.col[pi] < p.col[pk]) {
          ++pi;
        } else if (p.col[pi] > p.col[pk]) {
          ++pk;
        } else {
          sub_mul(lu_.block(pi), aik, lu_.block(pk), m);
          ++pi;
          ++pk;
        }
      }
    }
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> d(lu_.block(p.diag[i]), m, m);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> dinv(dinv_.data() + bs * i, m,
                                                                                             m);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(d);
    if (!(std::abs(lu.determinant()) > 0.0)) throw SolverAbort("ILU(0): singular diagonal block");
    dinv = lu.inverse();
  }
}

void BlockIlu0::apply(const double* r, double* z) const {
  const BlockPattern& p = lu_.pattern();
  const int m = lu_.m();
  const std::size_t bs = static_cast<std::size_t>(m) * m;
  std::vector<double> tmp(m);
  for (int i = 0; i < p.n; ++i) {
    double* zi = z + static_cast<std::size_t>(i) * m;
    for (int a = 0; a < m; ++a) zi[a] = r[static_cast<std::size_t>(i) * m + a];
    for (int kk = p.row_ptr[i]; kk < p.diag[i]; ++kk)
      sub_mat_vec(zi, lu_.block(kk), z + static_cast<std::size_t>(p.col[kk]) * m, m);
  }
  for (int i = p.n - 1; i >= 0; --i) {
    double* zi = z + static_cast<std::size_t>(i) * m;
    for (int kk = p.diag[i] + 1; kk < p.row_ptr[i + 1]; ++kk)
      sub_mat_vec(zi, lu_.block(kk), z + static_cast<std::size_t>(p.col[kk]) * m, m);
    const double* d = dinv_.data() + bs * i;
    for (int a = 0; a < m; ++a) {
      double s = 0.0;
      for (int c = 0; c < m; ++c) s += d[a * m + c] * zi[c];
      tmp[a] = s;
    }
    for (int a = 0; a < m; ++a) zi[a] = tmp[a];
  }
}

bool LinearSolver::uses_direct(const BlockMatrix& a) const {
  if (config_.kind == LinearSolverKind::direct) return true;
  if (config_.kind == LinearSolverKind::gmres) return false;
  return a.rows() <= config_.direct_max_unknowns;
}

BlockMatrix LinearSolver::compact_part(const BlockMatrix& a, std::shared_ptr<const BlockPattern> compact) const {
  return config_.lump ? a.lumped(compact) : a.restricted(compact);
}

void LinearSolver::setup(const BlockMatrix& a, std::shared_ptr<const BlockPattern> compact) {
  direct_ = uses_direct(a);
  if (direct_) {
    if (config_.kind == LinearSolverKind::direct && a.pattern().n > 512) {
      throw ConfigError("dense direct solver is limited to meshes of at most 512 cells");
    }
    dense_.compute(a.to_dense());
    return;
  }
  active_ = config_.preconditioner;
  switch (active_) {
    case PreconditionerKind::none:
      break;
    case PreconditionerKind::ilu0:
      ilu_.factor(a);
      break;
    case PreconditionerKind::ilu0_compact:
      ilu_.factor(compact ? compact_part(a, compact) : a);
      break;
    case PreconditionerKind::lu_compact: {
      const BlockMatrix c = compact ? compact_part(a, compact) : a;
      const BlockPattern& p = c.pattern();
      const int m = c.m();
      std::vector<Eigen::Triplet<double>> trips;
      trips.reserve(static_cast<std::size_t>(p.nnz()) * m * m);
      for (int i = 0; i < p.n; ++i)
        for (int k = p.row_ptr[i]; k < p.row_ptr[i + 1]; ++k)
          for (int r = 0; r < m; ++r)
            for (int s = 0; s < m; ++s) {
              const double v = c.block(k)[r * m + s];
              if (v != 0.0) trips.emplace_back(i * m + r, p.col[k] * m + s, v);
            }
      Eigen::SparseMatrix<double> sm(c.rows(), c.rows());
      sm.setFromTriplets(trips.begin(), trips.end());
      sm.makeCompressed();
      sparse_lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>();
      sparse_lu_->compute(sm);
      if (sparse_lu_->info() != Eigen::Success) throw SolverAbort("sparse LU preconditioner failed");
      break;
    }
  }
}

void LinearSolver::precondition(const double* r, double* z) const {
  switch (active_) {
    case PreconditionerKind::none:
      break;
    case PreconditionerKind::ilu0:
    case PreconditionerKind::ilu0_compact:
      ilu_.apply(r, z);
      return;
    case PreconditionerKind::lu_compact: {
      const Eigen::Index size = sparse_lu_->rows();
      Eigen::Map<const Eigen::VectorXd> rv(r, size);
      Eigen::Map<Eigen::VectorXd> zv(z, size);
      zv = sparse_lu_->solve(rv);
      return;
    }
  }
}

LinearReport LinearSolver::solve(const BlockMatrix& a, const std::vector<double>& b, std::vector<double>& x,
                                 double rel_tol) {
  const int n = a.rows();
  x.assign(n, 0.0);
  LinearReport rep;
  Eigen::Map<const Eigen::VectorXd> bv(b.data(), n);
  const double bnorm = bv.norm();
  if (bnorm == 0.0) {
    rep.converged = true;
    return rep;
  }
  if (direct_) {
    Eigen::Map<Eigen::VectorXd>(x.data(), n) = dense_.solve(bv);
    rep.converged = true;
    rep.iterations = 1;
    return rep;
  }

  const int restart = std::max(1, config_.restart);
  Eigen::MatrixXd v(n, restart + 1);
  Eigen::MatrixXd z(n, restart);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(restart + 1, restart);
  Eigen::VectorXd cs(restart), sn(restart), g(restart + 1);
  Eigen::VectorXd xv = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w(n), r(n);
  const bool identity = active_ == PreconditionerKind::none;

  int total = 0;
  double res = bnorm;
  while (total < config_.max_iter) {
    // r = b - A x
    a.multiply(xv.data(), r.data());
    r = bv - r;
    res = r.norm();
    if (res <= rel_tol * bnorm) break;
    v.col(0) = r / res;
    g.setZero();
    g(0) = res;
    int k = 0;
    for (; k < restart && total < config_.max_iter; ++k, ++total) {
      if (identity) {
        z.col(k) = v.col(k);
      } else {
        precondition(v.col(k).data(), z.col(k).data());
      }
      a.multiply(z.col(k).data(), w.data());
      for (int j = 0; j <= k; ++j) {
        h(j, k) = w.dot(v.col(j));
        w -= h(j, k) * v.col(j);
      }
      h(k + 1, k) = w.norm();
      if (h(k + 1, k) > 0.0) v.col(k + 1) = w / h(k + 1, k);
      for (int j = 0; j < k; ++j) {
        const double t = cs(j) * h(j, k) + sn(j) * h(j + 1, k);
        h(j + 1, k) = -sn(j) * h(j, k) + cs(j) * h(j + 1, k);
        h(j, k) = t;
      }
      const double rr = std::hypot(h(k, k), h(k + 1, k));
      cs(k) = rr > 0.0 ? h(k, k) / rr : 1.0;
      sn(k) = rr > 0.0 ? h(k + 1, k) / rr : 0.0;
      h(k, k) = rr;
      h(k + 1, k) = 0.0;
      g(k + 1) = -sn(k) * g(k);
      g(k) = cs(k) * g(k);
      res = std::abs(g(k + 1));
      if (res <= rel_tol * bnorm || h(k, k) == 0.0) {
        ++k;
        ++total;
        break;
      }
    }
    // Solve the small triangular system and update x.
    Eigen::VectorXd y = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    xv += z.leftCols(k) * y;
    if (res <= rel_tol * bnorm) break;
  }
  a.multiply(xv.data(), r.data());
  r = bv - r;
  rep.rel_residual = r.norm() / bnorm;
  rep.converged = rep.rel_residual <= 10.0 * rel_tol;
  rep.iterations = total;
  Eigen::Map<Eigen::VectorXd>(x.data(), n) = xv;
  return rep;
}

}  // namespace quinpi
