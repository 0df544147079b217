#include "bellsim/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "bellsim/schedule.hpp"

namespace bellsim {

std::vector<std::string> MeasurementRotation::system_factors() const
{
    std::vector<std::string> ids;
    for (const auto& o : outcomes) {
        for (const auto& ket : o.system_vector) {
            for (const auto& [id, label] : ket.labels) {
                if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
                    ids.push_back(id);
                }
            }
        }
    }
    return ids;
}

namespace {

Eigen::VectorXcd system_vector(const PartialState& state, const TensorSpace& sys)
{
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sys.dimension()));
    for (const auto& ket : state) {
        v[static_cast<Eigen::Index>(sys.index_of(ket.labels))] += ket.amplitude;
    }
    return v;
}

} // namespace

Operator rotation_hamiltonian(const MeasurementRotation& m, const SpacePtr& space)
{
    if (m.outcomes.empty()) {
        throw Error("rotation measurement needs at least one outcome");
    }
    if (!(m.duration > 0.0)) {
        throw Error("rotation measurement duration must be positive");
    }
    const auto sys_ids = m.system_factors();
    if (std::find(sys_ids.begin(), sys_ids.end(), m.pointer) != sys_ids.end()) {
        throw Error("pointer factor '" + m.pointer + "' cannot also be a system factor");
    }
    const auto sys = subspace(*space, sys_ids);
    std::vector<std::string> local_ids = sys_ids;
    local_ids.push_back(m.pointer);
    const auto local = subspace(*space, local_ids);

    const auto& pointer = local->factor(local->factor_count() - 1);
    const auto ready = local->label_index(local->factor_count() - 1, m.ready_label);

    std::vector<Eigen::VectorXcd> vectors;
    std::vector<std::size_t> pointer_labels;
    for (const auto& o : m.outcomes) {
        vectors.push_back(system_vector(o.system_vector, *sys));
        const auto k = local->label_index(local->factor_count() - 1, o.pointer_label);
        if (k == ready) {
            throw Error("outcome pointer label equals the ready label");
        }
        if (std::find(pointer_labels.begin(), pointer_labels.end(), k) != pointer_labels.end()) {
            throw Error("outcome pointer labels must be distinct");
        }
        pointer_labels.push_back(k);
    }
    for (std::size_t a = 0; a < vectors.size(); ++a) {
        for (std::size_t b = 0; b < vectors.size(); ++b) {
            const Complex overlap = vectors[a].dot(vectors[b]);
            const double expected = a == b ? 1.0 : 0.0;
            if (std::abs(overlap - expected) > 1e-12) {
                throw Error("outcome system vectors are not orthonormal");
            }
        }
    }

    const auto pdim = static_cast<Eigen::Index>(pointer.dimension());
    const double lambda = m.angular_rate();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(local->dimension()),
                                                static_cast<Eigen::Index>(local->dimension()));
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        Eigen::MatrixXcd projector = vectors[k] * vectors[k].adjoint();
        Eigen::MatrixXcd swing = Eigen::MatrixXcd::Zero(pdim, pdim);
        const auto pk = static_cast<Eigen::Index>(pointer_labels[k]);
        const auto p0 = static_cast<Eigen::Index>(ready);
        swing(pk, p0) = 1.0;
        swing(p0, pk) = -1.0;
        // Pointer is the last (least significant) local factor.
        for (Eigen::Index a = 0; a < projector.rows(); ++a) {
            for (Eigen::Index b = 0; b < projector.cols(); ++b) {
                h.block(a * pdim, b * pdim, pdim, pdim) += Complex(0.0, lambda) * projector(a, b) * swing;
            }
        }
    }
    return embed_operator(Operator(local, std::move(h), true), space);
}

Operator controlled_preparation(const std::string& control, const std::string& target, const ControlledBlocks& blocks,
                                const SpacePtr& space, const BeableSpec* spec)
{
    if (control == target) {
        throw Error("control and target factors must differ");
    }
    const std::vector<std::string> ids{control, target};
    const auto local = subspace(*space, ids);
    const auto cdim = local->factor(0).dimension();
    const auto tdim = static_cast<Eigen::Index>(local->factor(1).dimension());

    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(local->dimension()),
                                                static_cast<Eigen::Index>(local->dimension()));
    std::size_t used = 0;
    for (std::size_t c = 0; c < cdim; ++c) {
        const auto& label = local->factor(0).labels[c];
        Eigen::MatrixXcd block = Eigen::MatrixXcd::Identity(tdim, tdim);
        if (auto it = blocks.find(label); it != blocks.end()) {
            block = it->second;
            ++used;
            if (block.rows() != tdim || block.cols() != tdim) {
                throw Error("controlled block for '" + label + "' has the wrong size");
            }
            const double defect = (block.adjoint() * block - Eigen::MatrixXcd::Identity(tdim, tdim)).cwiseAbs().maxCoeff();
            if (defect > unitarity_tolerance) {
                throw Error("controlled block for '" + label + "' is not unitary");
            }
        }
        const auto off = static_cast<Eigen::Index>(c) * tdim;
        u.block(off, off, tdim, tdim) = block;
    }
    if (used != blocks.size()) {
        throw Error("controlled preparation names a control label that does not exist");
    }

    auto full = embed_operator(Operator(local, std::move(u), false), space);
    if (spec) {
        const double c = cross_sector_coupling(full, *spec);
        if (c > 1e-12) {
            throw Error("controlled preparation couples different sectors");
        }
    }
    return full;
}

} // namespace bellsim
