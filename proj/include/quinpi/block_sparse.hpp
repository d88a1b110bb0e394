#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

namespace quinpi {

/// Block-CSR sparsity pattern with sorted columns and a diagonal in every row.
struct BlockPattern {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<int> diag;

  /// Rows are sorted and deduplicated; the diagonal is added if missing.
  static BlockPattern from_rows(std::vector<std::vector<int>> rows);

  int nnz() const { return static_cast<int>(col.size()); }
  /// Block index of (i, j) or -1.
  int find(int i, int j) const;
  /// Same pattern restricted to entries kept by `keep`.
  template <class Pred>
  BlockPattern filtered(Pred keep) const {
    std::vector<std::vector<int>> rows(n);
    for (int i = 0; i < n; ++i)
      for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
        if (col[k] == i || keep(i, col[k])) rows[i].push_back(col[k]);
    return from_rows(std::move(rows));
  }
};

/// Block sparse matrix with m x m row-major blocks.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  BlockMatrix(std::shared_ptr<const BlockPattern> pattern, int m);

  const BlockPattern& pattern() const { return *pattern_; }
  std::shared_ptr<const BlockPattern> pattern_ptr() const { return pattern_; }
  int m() const { return m_; }
  int rows() const { return pattern_->n * m_; }

  double* block(int k) { return values_.data() + static_cast<std::size_t>(k) * m_ * m_; }
  const double* block(int k) const { return values_.data() + static_cast<std::size_t>(k) * m_ * m_; }

  void set_zero();
  /// Adds s * I to every diagonal block.
  void add_identity(double s = 1.0);
  /// y = A x
  void multiply(const double* x, double* y) const;
  Eigen::MatrixXd to_dense() const;
  /// Copy of the entries on a sub-pattern.
  BlockMatrix restricted(std::shared_ptr<const BlockPattern> sub) const;
  /// Entries on a sub-pattern, with the blocks outside it added to the
  /// diagonal block of their row (keeps the block row sums).
  BlockMatrix lumped(std::shared_ptr<const BlockPattern> sub) const;

 private:
  std::shared_ptr<const BlockPattern> pattern_;
  int m_ = 0;
  std::vector<double> values_;
};

}  // namespace quinpi
