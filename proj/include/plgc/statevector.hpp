#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "plgc/lattice.hpp"
#include "plgc/pauli.hpp"

namespace plgc {

inline constexpr int max_statevector_qubits = 26;

// Dense 2^n complex amplitude vector. Qubit 0 is the least-significant bit of
// the amplitude index.
struct Statevector {
    int n_qubits = 0;
    std::vector<std::complex<double>> amplitudes;

    std::size_t dim() const { return amplitudes.size(); }
};

inline Statevector zero_state(int n) {
    if (n < 1 || n > max_statevector_qubits) {
        throw std::invalid_argument("statevector size " + std::to_string(n) +
                                    " outside supported range [1, " +
                                    std::to_string(max_statevector_qubits) + "]");
    }
    Statevector psi;
    psi.n_qubits = n;
    psi.amplitudes.assign(std::size_t{1} << n, {0.0, 0.0});
    psi.amplitudes[0] = 1.0;
    return psi;
}

inline double norm(const Statevector& psi) {
    double s = 0.0;
    for (const auto& a : psi.amplitudes) s += std::norm(a);
    return std::sqrt(s);
}

namespace detail {

inline void check_qubit(const Statevector& psi, int q) {
    if (q < 0 || q >= psi.n_qubits) {
        throw std::out_of_range("qubit " + std::to_string(q) + " outside [0, " +
                                std::to_string(psi.n_qubits) + ")");
    }
}

}  // namespace detail

// Ry(theta) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]] on qubit q.
inline void apply_ry(Statevector& psi, int q, double theta) {
    detail::check_qubit(psi, q);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (i & bit) continue;
        const std::complex<double> a0 = psi.amplitudes[i];
        const std::complex<double> a1 = psi.amplitudes[i | bit];
        psi.amplitudes[i] = c * a0 - s * a1;
        psi.amplitudes[i | bit] = s * a0 + c * a1;
    }
}

inline void apply_h(Statevector& psi, int q) {
    detail::check_qubit(psi, q);
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (i & bit) continue;
        const std::complex<double> a0 = psi.amplitudes[i];
        const std::complex<double> a1 = psi.amplitudes[i | bit];
        psi.amplitudes[i] = inv_sqrt2 * (a0 + a1);
        psi.amplitudes[i | bit] = inv_sqrt2 * (a0 - a1);
    }
}

inline void apply_x(Statevector& psi, int q) {
    detail::check_qubit(psi, q);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (i & bit) continue;
        std::swap(psi.amplitudes[i], psi.amplitudes[i | bit]);
    }
}

inline void apply_cnot(Statevector& psi, int control, int target) {
    detail::check_qubit(psi, control);
    detail::check_qubit(psi, target);
    if (control == target) {
        throw std::invalid_argument("cnot control and target must differ, both are " +
                                    std::to_string(control));
    }
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if ((i & cbit) && !(i & tbit)) {
            std::swap(psi.amplitudes[i], psi.amplitudes[i | tbit]);
        }
    }
}

namespace detail {

inline void check_masks_fit(const PauliTermSum& ham, int n_qubits) {
    const uint64_t limit = (n_qubits >= 64) ? ~uint64_t{0} : ((uint64_t{1} << n_qubits) - 1);
    for (const auto& [coeff, ps] : ham.terms) {
        (void)coeff;
        if ((ps.z_mask | ps.x_mask) & ~limit) {
            throw std::invalid_argument("Pauli term acts on qubits beyond the state's " +
                                        std::to_string(n_qubits));
        }
    }
}

}  // namespace detail

// Exact <psi|H|psi>. Each term contributes sign(i & z_mask) conj(psi[i ^ x_mask]) psi[i];
// the imaginary residue is checked against 1e-10 and discarded.
inline double expectation(const Statevector& psi, const PauliTermSum& ham) {
    detail::check_masks_fit(ham, psi.n_qubits);
    std::complex<double> total = 0.0;
    for (const auto& [coeff, ps] : ham.terms) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < psi.dim(); ++i) {
            const double sign = (std::popcount(i & ps.z_mask) & 1) ? -1.0 : 1.0;
            acc += sign * std::conj(psi.amplitudes[i ^ ps.x_mask]) * psi.amplitudes[i];
        }
        total += coeff * acc;
    }
    if (std::abs(total.imag()) > 1e-10) {
        throw std::runtime_error("expectation value has imaginary residue " +
                                 std::to_string(total.imag()));
    }
    return total.real();
}

// Precompiled form of a Pauli sum for repeated evaluation on states of a fixed
// size: all diagonal terms collapse into one lookup array, flip terms keep
// their (x_mask, z_mask, coeff) triple. Also serves as the matrix-free
// Hamiltonian application for eigensolvers.
class CompiledPauliSum {
  public:
    CompiledPauliSum(const PauliTermSum& ham, int n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits < 1 || n_qubits > max_statevector_qubits) {
            throw std::invalid_argument("compiled Pauli sum size " + std::to_string(n_qubits) +
                                        " outside supported range [1, " +
                                        std::to_string(max_statevector_qubits) + "]");
        }
        detail::check_masks_fit(ham, n_qubits);
        diag_.assign(std::size_t{1} << n_qubits, 0.0);
        for (const auto& [coeff, ps] : ham.terms) {
            if (ps.x_mask == 0) {
                for (std::size_t i = 0; i < diag_.size(); ++i) {
                    diag_[i] += (std::popcount(i & ps.z_mask) & 1) ? -coeff : coeff;
                }
            } else {
                flips_.push_back({ps.x_mask, ps.z_mask, coeff});
            }
        }
    }

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return diag_.size(); }

    double value(const Statevector& psi) const {
        if (psi.n_qubits != n_qubits_) {
            throw std::invalid_argument("state size does not match compiled Pauli sum");
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < psi.dim(); ++i) {
            acc += diag_[i] * std::norm(psi.amplitudes[i]);
        }
        for (const auto& f : flips_) {
            double facc = 0.0;
            for (std::size_t i = 0; i < psi.dim(); ++i) {
                const double sign = (std::popcount(i & f.z_mask) & 1) ? -1.0 : 1.0;
                facc += sign * (std::conj(psi.amplitudes[i ^ f.x_mask]) *
                                psi.amplitudes[i]).real();
            }
            acc += f.coeff * facc;
        }
        return acc;
    }

    // y = H x for real vectors, exploiting that every term here is real in the
    // computational basis.
    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        if (x.size() != dim() || y.size() != dim()) {
            throw std::invalid_argument("vector size does not match compiled Pauli sum");
        }
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = diag_[i] * x[i];
        for (const auto& f : flips_) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double sign = (std::popcount(i & f.z_mask) & 1) ? -1.0 : 1.0;
                y[i ^ f.x_mask] += f.coeff * sign * x[i];
            }
        }
    }

    const std::vector<double>& diagonal() const { return diag_; }

  private:
    struct FlipTerm {
        uint64_t x_mask;
        uint64_t z_mask;
        double coeff;
    };

    int n_qubits_;
    std::vector<double> diag_;
    std::vector<FlipTerm> flips_;
};

struct DensityMatrix {
    int k_qubits = 0;
    Eigen::MatrixXcd entries;
};

// Partial trace over the complement of `keep`, via rho = M M^dagger where
// M[a, e] regroups amplitudes by (kept bits a, traced bits e).
inline DensityMatrix reduced_density_matrix(const Statevector& psi, const std::vector<int>& keep) {
    const int k = static_cast<int>(keep.size());
    if (k == 0) {
        throw std::invalid_argument("reduced density matrix needs at least one kept qubit");
    }
    if (k > rdm_max_qubits) {
        throw std::invalid_argument("reduced density matrix over " + std::to_string(k) +
                                    " qubits exceeds the cap of " +
                                    std::to_string(rdm_max_qubits));
    }
    uint64_t keep_mask = 0;
    for (int q : keep) {
        detail::check_qubit(psi, q);
        if (keep_mask & (uint64_t{1} << q)) {
            throw std::invalid_argument("duplicate qubit " + std::to_string(q) +
                                        " in kept set");
        }
        keep_mask |= uint64_t{1} << q;
    }

    std::vector<int> keep_sorted(keep);
    std::sort(keep_sorted.begin(), keep_sorted.end());
    std::vector<int> env;
    for (int q = 0; q < psi.n_qubits; ++q) {
        if (!(keep_mask & (uint64_t{1} << q))) env.push_back(q);
    }
    const int r = static_cast<int>(env.size());

    auto scatter = [](const std::vector<int>& positions, std::size_t value) {
        std::size_t out = 0;
        for (std::size_t b = 0; b < positions.size(); ++b) {
            if (value & (std::size_t{1} << b)) out |= std::size_t{1} << positions[b];
        }
        return out;
    };

    const std::size_t dk = std::size_t{1} << k;
    const std::size_t dr = std::size_t{1} << r;
    std::vector<std::size_t> keep_scatter(dk), env_scatter(dr);
    for (std::size_t a = 0; a < dk; ++a) keep_scatter[a] = scatter(keep_sorted, a);
    for (std::size_t e = 0; e < dr; ++e) env_scatter[e] = scatter(env, e);

    Eigen::MatrixXcd m(dk, dr);
    for (std::size_t e = 0; e < dr; ++e) {
        for (std::size_t a = 0; a < dk; ++a) {
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(e)) =
                psi.amplitudes[keep_scatter[a] | env_scatter[e]];
        }
    }

    DensityMatrix rho;
    rho.k_qubits = k;
    rho.entries.noalias() = m * m.adjoint();
    return rho;
}

// -sum lambda ln lambda with eigenvalues below 1e-12 treated as zero.
inline double von_neumann_entropy(const DensityMatrix& rho) {
    const Eigen::MatrixXcd& r = rho.entries;
    if (r.rows() != r.cols()) {
        throw std::invalid_argument("density matrix must be square");
    }
    if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(r, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("density matrix eigenvalue decomposition failed");
    }
    constexpr double clip = 1e-12;
    double s = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double lambda = solver.eigenvalues()[i];
        if (lambda > clip) s -= lambda * std::log(lambda);
    }
    return s;
}

inline double fidelity(const Statevector& a, const Statevector& b) {
    if (a.n_qubits != b.n_qubits) {
        throw std::invalid_argument("fidelity requires equal-sized states");
    }
    std::complex<double> overlap = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        overlap += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    }
    return std::norm(overlap);
}

}  // namespace plgc
