#include "transducer/hilbert.hpp"

#include "transducer/errors.hpp"

#include <algorithm>
#include <set>

namespace transducer {

bool ModeRegister::contains(std::string_view label) const {
  return std::any_of(modes_.begin(), modes_.end(), [&](const Mode& m) { return m.label == label; });
}

std::size_t ModeRegister::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].label == label) return i;
  }
  throw ValidationError("unknown mode label '" + std::string(label) + "'");
}

std::vector<int> ModeRegister::occupations(Eigen::Index basis_index) const {
  std::vector<int> occ(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    occ[i] = static_cast<int>((basis_index / strides_[i]) % modes_[i].dim);
  }
  return occ;
}

Eigen::Index ModeRegister::basis_index(std::span<const int> occupations) const {
  if (occupations.size() != modes_.size()) {
    throw ValidationError("expected " + std::to_string(modes_.size()) + " occupations, got " +
                          std::to_string(occupations.size()));
  }
  Eigen::Index idx = 0;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (occupations[i] < 0 || occupations[i] >= modes_[i].dim) {
      throw ValidationError("occupation " + std::to_string(occupations[i]) + " out of range for mode '" +
                            modes_[i].label + "' (dim " + std::to_string(modes_[i].dim) + ")");
    }
    idx += occupations[i] * strides_[i];
  }
  return idx;
}

ModeRegister ModeRegister::subregister(const std::vector<std::string>& labels) const {
  if (labels.empty()) throw ValidationError("empty mode selection");
  std::set<std::string> wanted;
  for (const auto& l : labels) {
    index_of(l);
    wanted.insert(l);
  }
  std::vector<std::pair<std::string, int>> specs;
  for (const auto& m : modes_) {
    if (wanted.count(m.label)) specs.emplace_back(m.label, m.dim);
  }
  return make_register(specs, dimension_);
}

ModeRegister make_register(const std::vector<std::pair<std::string, int>>& specs, Eigen::Index dimension_cap) {
  if (specs.empty()) throw ValidationError("register needs at least one mode");
  ModeRegister reg;
  std::set<std::string> seen;
  Eigen::Index total = 1;
  for (const auto& [label, dim] : specs) {
    if (!seen.insert(label).second) throw ValidationError("duplicate mode label '" + label + "'");
    if (dim < 2) throw ValidationError("mode '" + label + "' has dim " + std::to_string(dim) + " < 2");
    total *= dim;
    if (total > dimension_cap) {
      throw ValidationError("register dimension exceeds cap " + std::to_string(dimension_cap));
    }
    reg.modes_.push_back({label, dim});
  }
  reg.dimension_ = total;
  reg.strides_.assign(specs.size(), 1);
  for (std::size_t i = specs.size(); i-- > 1;) {
    reg.strides_[i - 1] = reg.strides_[i] * reg.modes_[i].dim;
  }
  return reg;
}

OperatorMatrix::OperatorMatrix(ModeRegister reg, Matrix entries) : reg_(std::move(reg)), entries_(std::move(entries)) {
  if (entries_.rows() != reg_.dimension() || entries_.cols() != reg_.dimension()) {
    throw ValidationError("operator shape does not match register dimension " + std::to_string(reg_.dimension()));
  }
}

namespace {
void require_same_register(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!(a.reg() == b.reg())) throw ValidationError("operators live on different registers");
}
}  // namespace

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_register(a, b);
  return {a.reg_, a.entries_ + b.entries_};
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_register(a, b);
  return {a.reg_, a.entries_ - b.entries_};
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_register(a, b);
  return {a.reg_, a.entries_ * b.entries_};
}

DensityDiagnostics diagnose(const Matrix& rho) {
  return {hermiticity_error(rho), std::abs(rho.trace() - Complex(1.0)), min_eigenvalue(rho)};
}

std::string density_violation(const Matrix& rho) {
  if (rho.rows() != rho.cols()) return "density matrix is not square";
  const auto d = diagnose(rho);
  if (!(d.hermiticity_error <= DensityMatrix::kHermiticityTol)) {
    return "density matrix not Hermitian (max |rho - rho^dag| = " + std::to_string(d.hermiticity_error) + ")";
  }
  if (!(d.trace_error <= DensityMatrix::kTraceTol)) {
    return "density matrix trace deviates from 1 by " + std::to_string(d.trace_error);
  }
  if (!(d.min_eigenvalue >= DensityMatrix::kPositivityTol)) {
    return "density matrix has eigenvalue " + std::to_string(d.min_eigenvalue);
  }
  return {};
}

DensityMatrix::DensityMatrix(ModeRegister reg, Matrix entries) : reg_(std::move(reg)), entries_(std::move(entries)) {
  if (entries_.rows() != reg_.dimension() || entries_.cols() != reg_.dimension()) {
    throw ValidationError("density matrix shape does not match register dimension");
  }
  if (auto why = density_violation(entries_); !why.empty()) throw ValidationError(why);
}

Matrix lowering_matrix(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

OperatorMatrix local_operator(const ModeRegister& reg, std::string_view label, const Matrix& local) {
  const auto k = reg.index_of(label);
  const int d = reg.modes()[k].dim;
  if (local.rows() != d || local.cols() != d) throw ValidationError("local operator has wrong dimension");
  const Eigen::Index inner = reg.stride(k);
  const Eigen::Index outer = reg.dimension() / (inner * d);
  Matrix full = kron(kron(Matrix::Identity(outer, outer), local), Matrix::Identity(inner, inner));
  return {reg, std::move(full)};
}

OperatorMatrix identity_op(const ModeRegister& reg) {
  return {reg, Matrix::Identity(reg.dimension(), reg.dimension())};
}

OperatorMatrix annihilation_op(const ModeRegister& reg, std::string_view label) {
  return local_operator(reg, label, lowering_matrix(reg.dim(label)));
}

OperatorMatrix number_op(const ModeRegister& reg, std::string_view label) {
  const int d = reg.dim(label);
  Matrix n = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) n(i, i) = i;
  return local_operator(reg, label, n);
}

DensityMatrix basis_state(const ModeRegister& reg, std::span<const int> occupations) {
  const auto idx = reg.basis_index(occupations);
  Matrix rho = Matrix::Zero(reg.dimension(), reg.dimension());
  rho(idx, idx) = 1.0;
  return {reg, std::move(rho)};
}

DensityMatrix pure_state(const ModeRegister& reg, const Vector& psi) {
  if (psi.size() != reg.dimension()) throw ValidationError("state vector has wrong dimension");
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw ValidationError("amplitudes not normalised (norm " + std::to_string(norm) + ")");
  }
  return {reg, psi * psi.adjoint()};
}

DensityMatrix superposition_state(const ModeRegister& reg, const std::vector<Amplitude>& terms) {
  Vector psi = Vector::Zero(reg.dimension());
  for (const auto& t : terms) psi(reg.basis_index(t.occupations)) += t.value;
  return pure_state(reg, psi);
}

Matrix partial_trace(const ModeRegister& reg, const Matrix& rho, const std::vector<std::string>& keep) {
  const ModeRegister kept = reg.subregister(keep);
  std::vector<bool> is_kept(reg.size(), false);
  for (const auto& m : kept.modes()) is_kept[reg.index_of(m.label)] = true;

  // Full index = kept part + traced part, both as offsets into the full basis.
  std::vector<Eigen::Index> kept_offset{0};
  std::vector<Eigen::Index> traced_offset{0};
  for (std::size_t i = 0; i < reg.size(); ++i) {
    auto& offsets = is_kept[i] ? kept_offset : traced_offset;
    std::vector<Eigen::Index> next;
    next.reserve(offsets.size() * reg.modes()[i].dim);
    for (auto base : offsets) {
      for (int n = 0; n < reg.modes()[i].dim; ++n) next.push_back(base + n * reg.stride(i));
    }
    offsets = std::move(next);
  }

  const auto dk = static_cast<Eigen::Index>(kept_offset.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i) {
    for (Eigen::Index j = 0; j < dk; ++j) {
      Complex acc = 0;
      for (auto t : traced_offset) acc += rho(kept_offset[i] + t, kept_offset[j] + t);
      out(i, j) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  return {rho.reg().subregister(keep), partial_trace(rho.reg(), rho.matrix(), keep)};
}

Complex expectation(const DensityMatrix& rho, const OperatorMatrix& op) {
  if (!(rho.reg() == op.reg())) throw ValidationError("state and operator live on different registers");
  return (rho.matrix() * op.matrix()).trace();
}

}  // namespace transducer
