#pragma once

// Composite Hilbert spaces of truncated bosonic modes.
//
// Basis ordering: the first declared mode is the most significant tensor
// factor, so for modes (m0, m1, ..., mk) the basis index of |n0 n1 ... nk> is
// sum_i n_i * stride_i with stride_k = 1. Every operator and state in this
// library is laid out against that order.

#include "transducer/linalg.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace transducer {

struct Mode {
  std::string label;
  int dim = 2;

  bool operator==(const Mode&) const = default;
};

class ModeRegister {
 public:
  static constexpr Eigen::Index kDefaultDimensionCap = 4096;

  const std::vector<Mode>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  Eigen::Index dimension() const { return dimension_; }

  bool contains(std::string_view label) const;
  /// Position of the mode in tensor order. Throws ValidationError if absent.
  std::size_t index_of(std::string_view label) const;
  int dim(std::string_view label) const { return modes_[index_of(label)].dim; }
  Eigen::Index stride(std::size_t mode_index) const { return strides_[mode_index]; }

  std::vector<int> occupations(Eigen::Index basis_index) const;
  Eigen::Index basis_index(std::span<const int> occupations) const;

  /// Register of the given modes, kept in this register's order.
  ModeRegister subregister(const std::vector<std::string>& labels) const;

  bool operator==(const ModeRegister& other) const { return modes_ == other.modes_; }

 private:
  friend ModeRegister make_register(const std::vector<std::pair<std::string, int>>&, Eigen::Index);

  std::vector<Mode> modes_;
  std::vector<Eigen::Index> strides_;
  Eigen::Index dimension_ = 0;
};

ModeRegister make_register(const std::vector<std::pair<std::string, int>>& specs,
                           Eigen::Index dimension_cap = ModeRegister::kDefaultDimensionCap);

/// Dense operator on a register's space.
class OperatorMatrix {
 public:
  OperatorMatrix(ModeRegister reg, Matrix entries);

  const ModeRegister& reg() const { return reg_; }
  const Matrix& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

  OperatorMatrix adjoint() const { return {reg_, entries_.adjoint()}; }

  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator*(Complex s, const OperatorMatrix& a) { return {a.reg_, s * a.entries_}; }

 private:
  ModeRegister reg_;
  Matrix entries_;
};

/// Hermitian, positive semidefinite, unit-trace matrix. Construction checks all three.
class DensityMatrix {
 public:
  static constexpr double kHermiticityTol = 1e-10;
  static constexpr double kTraceTol = 1e-8;
  static constexpr double kPositivityTol = -1e-8;

  DensityMatrix(ModeRegister reg, Matrix entries);

  const ModeRegister& reg() const { return reg_; }
  const Matrix& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

  double purity() const { return (entries_ * entries_).trace().real(); }

 private:
  ModeRegister reg_;
  Matrix entries_;
};

struct DensityDiagnostics {
  double hermiticity_error = 0;
  double trace_error = 0;
  double min_eigenvalue = 0;
};

DensityDiagnostics diagnose(const Matrix& rho);

/// Empty string when rho satisfies the DensityMatrix invariants, otherwise a description.
std::string density_violation(const Matrix& rho);

/// Embed a single-mode operator at the mode's tensor position.
OperatorMatrix local_operator(const ModeRegister& reg, std::string_view label, const Matrix& local);
OperatorMatrix identity_op(const ModeRegister& reg);
OperatorMatrix annihilation_op(const ModeRegister& reg, std::string_view label);
OperatorMatrix number_op(const ModeRegister& reg, std::string_view label);

/// Single-mode lowering operator with sqrt(n) on the superdiagonal.
Matrix lowering_matrix(int dim);

DensityMatrix basis_state(const ModeRegister& reg, std::span<const int> occupations);

struct Amplitude {
  std::vector<int> occupations;
  Complex value;
};

/// |psi><psi| for psi = sum of amplitude * |occupations>. Norm must be 1 within 1e-10.
DensityMatrix superposition_state(const ModeRegister& reg, const std::vector<Amplitude>& terms);
DensityMatrix pure_state(const ModeRegister& reg, const Vector& psi);

/// Reduced density matrix on `keep`, returned in the register's order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);
Matrix partial_trace(const ModeRegister& reg, const Matrix& rho, const std::vector<std::string>& keep);

Complex expectation(const DensityMatrix& rho, const OperatorMatrix& op);

}  // namespace transducer
