#include "bellsim/operator.hpp"

#include <string>

namespace bellsim {

Operator::Operator(SpacePtr space, Eigen::MatrixXcd entries, bool hermitian)
    : space_(std::move(space)), entries_(std::move(entries)), hermitian_(hermitian)
{
    if (!space_) {
        throw Error("operator needs a space");
    }
    const auto n = static_cast<Eigen::Index>(space_->dimension());
    if (entries_.rows() != n || entries_.cols() != n) {
        throw Error("operator matrix must be square with the space's dimension");
    }
    if (hermitian_) {
        const double defect = hermiticity_defect();
        if (defect > hermiticity_tolerance) {
            throw Error("operator flagged hermitian deviates from its adjoint by " + std::to_string(defect));
        }
    }
}

Operator Operator::zero(const SpacePtr& space)
{
    const auto n = static_cast<Eigen::Index>(space->dimension());
    return Operator(space, Eigen::MatrixXcd::Zero(n, n), true);
}

Operator Operator::identity(const SpacePtr& space)
{
    const auto n = static_cast<Eigen::Index>(space->dimension());
    return Operator(space, Eigen::MatrixXcd::Identity(n, n), true);
}

double Operator::hermiticity_defect() const
{
    if (entries_.size() == 0) {
        return 0.0;
    }
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double Operator::unitarity_defect() const
{
    const auto n = entries_.rows();
    return (entries_.adjoint() * entries_ - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

StateVector Operator::apply(const StateVector& psi) const
{
    if (!same_space(space_, psi.space())) {
        throw Error("operator and state live in different spaces");
    }
    return StateVector(psi.space(), entries_ * psi.amplitudes());
}

Operator Operator::compose(const Operator& other) const
{
    if (!same_space(space_, other.space_)) {
        throw Error("cannot compose operators on different spaces");
    }
    return Operator(space_, entries_ * other.entries_, false);
}

Operator embed_operator(const Operator& local, const SpacePtr& target)
{
    const auto& sub = *local.space();
    const auto& full = *target;

    // Position in `full` of each local factor.
    std::vector<std::size_t> where(sub.factor_count());
    for (std::size_t i = 0; i < sub.factor_count(); ++i) {
        const auto& f = sub.factor(i);
        const auto pos = full.find_factor(f.id);
        if (!pos) {
            throw Error("embed_operator: factor '" + f.id + "' is not part of the target space");
        }
        if (full.factor(*pos).labels != f.labels) {
            throw Error("embed_operator: factor '" + f.id + "' has a different basis in the target space");
        }
        where[i] = *pos;
    }

    const std::size_t n = full.dimension();
    const std::size_t m = sub.dimension();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const auto& L = local.entries();

    for (std::size_t col = 0; col < n; ++col) {
        // Split the column index into its local part and the rest.
        std::size_t local_col = 0;
        std::size_t rest = col;
        for (std::size_t i = 0; i < where.size(); ++i) {
            const std::size_t d = full.digit(col, where[i]);
            local_col += d * sub.stride(i);
            rest -= d * full.stride(where[i]);
        }
        for (std::size_t local_row = 0; local_row < m; ++local_row) {
            const Complex v = L(static_cast<Eigen::Index>(local_row), static_cast<Eigen::Index>(local_col));
            if (v == Complex{}) {
                continue;
            }
            std::size_t row = rest;
            for (std::size_t i = 0; i < where.size(); ++i) {
                row += sub.digit(local_row, i) * full.stride(where[i]);
            }
            out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
        }
    }
    return Operator(target, std::move(out), local.hermitian());
}

Complex matrix_element(const StateVector& bra, const Operator& op, const StateVector& ket)
{
    require_same_space(bra, ket, "matrix element");
    if (!same_space(op.space(), ket.space())) {
        throw Error("matrix element: operator lives in a different space");
    }
    return bra.amplitudes().dot(op.entries() * ket.amplitudes());
}

} // namespace bellsim
