#pragma once

#include <stdexcept>
#include <string>

namespace quinpi {

/// Invalid user input: bad mesh extents, malformed configuration values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed mesh file. The message names the offending section.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mesh cannot support the reconstruction (e.g. boundary stencil too small).
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rank-deficient least-squares block.
class DegenerateStencil : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state with nonpositive density or pressure reached a model function.
class NonphysicalState : public std::runtime_error {
 public:
  explicit NonphysicalState(const std::string& what, int cell = -1)
      : std::runtime_error(cell >= 0 ? what + " (cell " + std::to_string(cell) + ")" : what),
        cell_(cell) {}
  int cell() const noexcept { return cell_; }

 private:
  int cell_;
};

/// Time stepping gave up after repeated rejections.
class SolverAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace quinpi
