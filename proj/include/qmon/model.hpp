#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qmon/linalg.hpp"

namespace qmon {

enum class Axis { x, y, z };

ComplexMatrix pauli(Axis which);

/// Orthonormal measurement basis. Column k of `v()` is |phi_k> written in
/// computational coordinates, so V maps measurement-basis coordinates to
/// computational ones and pi_k = V |k><k| V^dagger.
class MeasurementBasis {
  public:
    MeasurementBasis(ComplexMatrix v, std::vector<std::string> labels);

    static MeasurementBasis computational(std::size_t dim);

    std::size_t dim() const { return v_.dim(); }
    const ComplexMatrix &v() const { return v_; }
    const std::vector<std::string> &labels() const { return labels_; }

    std::vector<cplx> state(std::size_t k) const { return v_.column(k); }
    ComplexMatrix projector(std::size_t k) const;

  private:
    ComplexMatrix v_;
    std::vector<std::string> labels_;
};

enum class ModelKind { single_qubit, singlet_triplet, bell, custom };

std::string_view to_string(ModelKind kind);

class Model {
  public:
    Model(std::string name, ModelKind kind, ComplexMatrix hamiltonian, MeasurementBasis basis,
          std::vector<cplx> initial_state);

    const std::string &name() const { return name_; }
    ModelKind kind() const { return kind_; }
    std::size_t dim() const { return hamiltonian_.dim(); }
    const ComplexMatrix &hamiltonian() const { return hamiltonian_; }
    const MeasurementBasis &basis() const { return basis_; }
    const std::vector<cplx> &initial_state() const { return initial_state_; }

    /// Born distribution of the initial state in the measurement basis.
    std::vector<double> initial_probabilities() const;

  private:
    std::string name_;
    ModelKind kind_;
    ComplexMatrix hamiltonian_;
    MeasurementBasis basis_;
    std::vector<cplx> initial_state_;
};

enum class TwoQubitBasis { singlet_triplet, bell };

/// H = sigma_x / 2 measured in the computational basis, starting from |0>.
Model single_qubit_model();

/// H = (sigma_x (x) I + I (x) sigma_x) / 2 starting from |00>.
Model two_qubit_model(TwoQubitBasis basis);

/// Resolves `single_qubit`, `two_qubit_singlet_triplet`, `two_qubit_bell`.
Model model_by_name(std::string_view name);

/// Custom model from JSON text. Schema:
///   { "name": "...",
///     "hamiltonian":   {"real": [[..]], "imag": [[..]]},
///     "basis":         {"real": [[..]], "imag": [[..]], "labels": [..]},
///     "initial_state": {"real": [..],   "imag": [..]} }
/// `imag` blocks are optional; "basis" defaults to the computational basis.
Model parse_model_json(std::string_view text);
Model load_model_file(const std::filesystem::path &path);

/// V^dagger H V
ComplexMatrix hamiltonian_in_basis(const Model &m);

/// Partition of the basis indices into groups with no coupling between groups.
struct BlockStructure {
    std::vector<std::vector<std::size_t>> blocks;
    double threshold = 0.0;

    friend bool operator==(const BlockStructure &, const BlockStructure &) = default;
};

inline constexpr double kBlockThreshold = 1e-10;

/// Connected components of the graph with an edge k-k' whenever
/// |h(k, k')| > threshold. Blocks are sorted, and ordered by smallest index.
BlockStructure detect_blocks(const ComplexMatrix &h_in_basis, double threshold = kBlockThreshold);

} // namespace qmon
