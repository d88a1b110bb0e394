#include "quinpi/block_sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace quinpi {

BlockPattern BlockPattern::from_rows(std::vector<std::vector<int>> rows) {
  BlockPattern p;
  p.n = static_cast<int>(rows.size());
  p.row_ptr.assign(p.n + 1, 0);
  p.diag.assign(p.n, -1);
  for (int i = 0; i < p.n; ++i) {
    auto& r = rows[i];
    r.push_back(i);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    p.row_ptr[i + 1] = p.row_ptr[i] + static_cast<int>(r.size());
  }
  p.col.reserve(p.row_ptr.back());
  for (int i = 0; i < p.n; ++i) {
    for (int j : rows[i]) {
      if (j == i) p.diag[i] = static_cast<int>(p.col.size());
      p.col.push_back(j);
    }
  }
  return p;
}

int BlockPattern::find(int i, int j) const {
  const auto begin = col.begin() + row_ptr[i];
  const auto end = col.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  return (it != end && *it == j) ? static_cast<int>(it - col.begin()) : -1;
}

BlockMatrix::BlockMatrix(std::shared_ptr<const BlockPattern> pattern, int m)
    : pattern_(std::move(pattern)), m_(m), values_(static_cast<std::size_t>(pattern_->nnz()) * m * m, 0.0) {}

void BlockMatrix::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

void BlockMatrix::add_identity(double s) {
  for (int i = 0; i < pattern_->n; ++i) {
    double* b = block(pattern_->diag[i]);
    for (int k = 0; k < m_; ++k) b[k * m_ + k] += s;
  }
}

void BlockMatrix::multiply(const double* x, double* y) const {
  const BlockPattern& p = *pattern_;
  const int m = m_;
  for (int i = 0; i < p.n; ++i) {
    double* yi = y + static_cast<std::size_t>(i) * m;
    for (int a = 0; a < m; ++a) yi[a] = 0.0;
    for (int k = p.row_ptr[i]; k < p.row_ptr[i + 1]; ++k) {
      const double* b = block(k);
      const double* xj = x + static_cast<std::size_t>(p.col[k]) * m;
      for (int a = 0; a < m; ++a) {
        double s = 0.0;
        for (int c = 0; c < m; ++c) s += b[a * m + c] * xj[c];
        yi[a] += s;
      }
    }
  }
}

Eigen::MatrixXd BlockMatrix::to_dense() const {
  const BlockPattern& p = *pattern_;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows(), rows());
  for (int i = 0; i < p.n; ++i)
    for (int k = p.row_ptr[i]; k < p.row_ptr[i + 1]; ++k)
      for (int a = 0; a < m_; ++a)
        for (int c = 0; c < m_; ++c) d(i * m_ + a, p.col[k] * m_ + c) += block(k)[a * m_ + c];
  return d;
}

BlockMatrix BlockMatrix::restricted(std::shared_ptr<const BlockPattern> sub) const {
  BlockMatrix out(sub, m_);
  const std::size_t bs = static_cast<std::size_t>(m_) * m_;
  for (int i = 0; i < sub->n; ++i) {
    for (int k = sub->row_ptr[i]; k < sub->row_ptr[i + 1]; ++k) {
      const int src = pattern_->find(i, sub->col[k]);
      if (src < 0) throw std::logic_error("restricted: sub-pattern entry missing from the matrix");
      std::copy(block(src), block(src) + bs, out.block(k));
    }
  }
  return out;
}

BlockMatrix BlockMatrix::lumped(std::shared_ptr<const BlockPattern> sub) const {
  BlockMatrix out(sub, m_);
  out.set_zero();
  const std::size_t bs = static_cast<std::size_t>(m_) * m_;
  for (int i = 0; i < pattern_->n; ++i) {
    for (int k = pattern_->row_ptr[i]; k < pattern_->row_ptr[i + 1]; ++k) {
      int dst = sub->find(i, pattern_->col[k]);
      if (dst < 0) dst = sub->diag[i];
      double* o = out.block(dst);
      const double* b = block(k);
      for (std::size_t q = 0; q < bs; ++q) o[q] += b[q];
    }
  }
  return out;
}

}  // namespace quinpi
