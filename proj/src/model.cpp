#include "qmon/model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qmon {

namespace {

constexpr double r2 = 1.0 / std::numbers::sqrt2;

ComplexMatrix read_complex_matrix(const nlohmann::json &j, const char *what) {
    if (!j.is_object() || !j.contains("real")) throw DataError(std::string(what) + ": missing \"real\" entries");
    const auto &re = j.at("real");
    const std::size_t n = re.size();
    if (n == 0) throw DataError(std::string(what) + ": empty matrix");
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (re[i].size() != n) throw DataError(std::string(what) + ": matrix is not square");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = re[i][k].get<double>();
    }
    if (j.contains("imag")) {
        const auto &im = j.at("imag");
        if (im.size() != n) throw DataError(std::string(what) + ": imag part has wrong shape");
        for (std::size_t i = 0; i < n; ++i) {
            if (im[i].size() != n) throw DataError(std::string(what) + ": imag part has wrong shape");
            for (std::size_t k = 0; k < n; ++k) m(i, k) += cplx(0.0, im[i][k].get<double>());
        }
    }
    m.check_finite();
    return m;
}

std::vector<cplx> read_complex_vector(const nlohmann::json &j, const char *what) {
    if (!j.is_object() || !j.contains("real")) throw DataError(std::string(what) + ": missing \"real\" entries");
    const auto &re = j.at("real");
    std::vector<cplx> v(re.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = re[i].get<double>();
    if (j.contains("imag")) {
        const auto &im = j.at("imag");
        if (im.size() != v.size()) throw DataError(std::string(what) + ": imag part has wrong length");
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += cplx(0.0, im[i].get<double>());
    }
    return v;
}

std::vector<std::string> numbered_labels(std::string_view stem, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(std::string(stem) + std::to_string(k));
    return out;
}

} // namespace

ComplexMatrix pauli(Axis which) {
    switch (which) {
    case Axis::x:
        return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
    case Axis::y:
        return ComplexMatrix{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}};
    case Axis::z:
        return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
    }
    throw InvalidArgument("pauli: unknown axis");
}

MeasurementBasis::MeasurementBasis(ComplexMatrix v, std::vector<std::string> labels)
    : v_(std::move(v)), labels_(std::move(labels)) {
    if (labels_.size() != v_.dim()) throw InvalidArgument("MeasurementBasis: need one label per basis state");
    if (unitarity_defect(v_) > kUnitaryTol) throw InvalidArgument("MeasurementBasis: V is not unitary within 1e-12");
}

MeasurementBasis MeasurementBasis::computational(std::size_t dim) {
    return MeasurementBasis(ComplexMatrix::identity(dim), numbered_labels("", dim));
}

ComplexMatrix MeasurementBasis::projector(std::size_t k) const {
    const auto phi = state(k);
    ComplexMatrix p(dim());
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) p(i, j) = phi[i] * std::conj(phi[j]);
    return p;
}

std::string_view to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::single_qubit:
        return "single_qubit";
    case ModelKind::singlet_triplet:
        return "two_qubit_singlet_triplet";
    case ModelKind::bell:
        return "two_qubit_bell";
    case ModelKind::custom:
        return "custom";
    }
    return "unknown";
}

Model::Model(std::string name, ModelKind kind, ComplexMatrix hamiltonian, MeasurementBasis basis,
             std::vector<cplx> initial_state)
    : name_(std::move(name)), kind_(kind), hamiltonian_(std::move(hamiltonian)), basis_(std::move(basis)),
      initial_state_(std::move(initial_state)) {
    if (hermiticity_defect(hamiltonian_) > kHermitianTol) {
        throw InvalidArgument("Model: Hamiltonian is not Hermitian within 1e-12");
    }
    if (basis_.dim() != dim() || initial_state_.size() != dim()) {
        throw InvalidArgument("Model: Hamiltonian, basis and initial state dimensions differ");
    }
    double norm2 = 0.0;
    for (const auto &c : initial_state_) norm2 += std::norm(c);
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) throw InvalidArgument("Model: initial state is not normalized");
}

std::vector<double> Model::initial_probabilities() const {
    std::vector<double> p(dim());
    const auto &v = basis_.v();
    for (std::size_t k = 0; k < dim(); ++k) {
        cplx amp{};
        for (std::size_t i = 0; i < dim(); ++i) amp += std::conj(v(i, k)) * initial_state_[i];
        p[k] = std::norm(amp);
    }
    return p;
}

Model single_qubit_model() {
    return Model("single_qubit", ModelKind::single_qubit, 0.5 * pauli(Axis::x), MeasurementBasis::computational(2),
                 {1.0, 0.0});
}

Model two_qubit_model(TwoQubitBasis basis) {
    const auto id = ComplexMatrix::identity(2);
    const auto sx = pauli(Axis::x);
    ComplexMatrix h = 0.5 * (kron(sx, id) + kron(id, sx));
    std::vector<cplx> psi0{1.0, 0.0, 0.0, 0.0};

    if (basis == TwoQubitBasis::singlet_triplet) {
        // columns: |00>, (|01>+|10>)/sqrt2, (|10>-|01>)/sqrt2, |11>
        ComplexMatrix v{{1.0, 0.0, 0.0, 0.0}, {0.0, r2, -r2, 0.0}, {0.0, r2, r2, 0.0}, {0.0, 0.0, 0.0, 1.0}};
        return Model(std::string(to_string(ModelKind::singlet_triplet)), ModelKind::singlet_triplet, std::move(h),
                     MeasurementBasis(std::move(v), numbered_labels("psi", 4)), std::move(psi0));
    }
    // columns: (|00>+|11>), (|01>+|10>), (|00>-|11>), (|01>-|10>), all over sqrt2
    ComplexMatrix v{{r2, 0.0, r2, 0.0}, {0.0, r2, 0.0, r2}, {0.0, r2, 0.0, -r2}, {r2, 0.0, -r2, 0.0}};
    return Model(std::string(to_string(ModelKind::bell)), ModelKind::bell, std::move(h),
                 MeasurementBasis(std::move(v), numbered_labels("beta", 4)), std::move(psi0));
}

Model model_by_name(std::string_view name) {
    if (name == "single_qubit") return single_qubit_model();
    if (name == "two_qubit_singlet_triplet") return two_qubit_model(TwoQubitBasis::singlet_triplet);
    if (name == "two_qubit_bell") return two_qubit_model(TwoQubitBasis::bell);
    throw InvalidArgument("unknown model '" + std::string(name) +
                          "' (expected single_qubit, two_qubit_singlet_triplet or two_qubit_bell)");
}

Model parse_model_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw DataError(std::string("model file: ") + e.what());
    }
    try {
        auto h = read_complex_matrix(j.at("hamiltonian"), "hamiltonian");
        const std::size_t n = h.dim();
        auto basis = MeasurementBasis::computational(n);
        if (j.contains("basis")) {
            auto v = read_complex_matrix(j.at("basis"), "basis");
            std::vector<std::string> labels = j.at("basis").contains("labels")
                                                  ? j.at("basis").at("labels").get<std::vector<std::string>>()
                                                  : numbered_labels("", v.dim());
            basis = MeasurementBasis(std::move(v), std::move(labels));
        }
        auto psi = read_complex_vector(j.at("initial_state"), "initial_state");
        return Model(j.value("name", std::string("custom")), ModelKind::custom, std::move(h), std::move(basis),
                     std::move(psi));
    } catch (const nlohmann::json::exception &e) {
        throw DataError(std::string("model file: ") + e.what());
    } catch (const InvalidArgument &e) {
        throw DataError(std::string("model file: ") + e.what());
    }
}

Model load_model_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_json(ss.str());
}

ComplexMatrix hamiltonian_in_basis(const Model &m) {
    const auto &v = m.basis().v();
    return matmul(adjoint(v), matmul(m.hamiltonian(), v));
}

BlockStructure detect_blocks(const ComplexMatrix &h, double threshold) {
    if (!(threshold > 0.0)) throw InvalidArgument("detect_blocks: threshold must be positive");
    const std::size_t n = h.dim();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && std::abs(h(i, j)) > threshold) {
                const auto a = find(i);
                const auto b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }

    BlockStructure out{{}, threshold};
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto root = find(i);
        if (slot[root] == n) {
            slot[root] = out.blocks.size();
            out.blocks.emplace_back();
        }
        out.blocks[slot[root]].push_back(i);
    }
    return out;
}

} // namespace qmon
