#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "plgc/lattice.hpp"
#include "plgc/pauli.hpp"
#include "plgc/random.hpp"
#include "plgc/statevector.hpp"

namespace plgc {

struct EdResult {
    double energy = 0.0;
    Statevector ground_vector;
    int iterations = 0;  // matrix applications consumed (0 for the dense path)
    double residual_norm = 0.0;
};

// H_TCM(x) as a matrix-free operator: the compiled diagonal covers stars and
// field, each plaquette is an index-XOR permutation.
class TcmOperator {
  public:
    TcmOperator(const LatticeGeometry& geom, double x)
        : n_qubits_(geom.n_qubits), compiled_(hamiltonian_tcm(geom, x), geom.n_qubits) {}

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return compiled_.dim(); }

    void apply(const std::vector<double>& v, std::vector<double>& w) const {
        compiled_.apply(v, w);
    }

    std::vector<std::complex<double>> apply(const std::vector<std::complex<double>>& v) const {
        if (v.size() != dim()) {
            throw std::invalid_argument("vector length " + std::to_string(v.size()) +
                                        " does not match dimension " + std::to_string(dim()));
        }
        std::vector<double> re(dim()), im(dim()), wre(dim()), wim(dim());
        for (std::size_t i = 0; i < dim(); ++i) {
            re[i] = v[i].real();
            im[i] = v[i].imag();
        }
        compiled_.apply(re, wre);
        compiled_.apply(im, wim);
        std::vector<std::complex<double>> w(dim());
        for (std::size_t i = 0; i < dim(); ++i) w[i] = {wre[i], wim[i]};
        return w;
    }

    const CompiledPauliSum& compiled() const { return compiled_; }

  private:
    int n_qubits_;
    CompiledPauliSum compiled_;
};

inline std::vector<std::complex<double>> matvec(const LatticeGeometry& geom, double x,
                                                const std::vector<std::complex<double>>& v) {
    return TcmOperator(geom, x).apply(v);
}

namespace detail {

inline double residual_of(const TcmOperator& op, const std::vector<double>& v, double energy) {
    std::vector<double> w(v.size());
    op.apply(v, w);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = w[i] - energy * v[i];
        num += r * r;
        den += v[i] * v[i];
    }
    return std::sqrt(num) / std::sqrt(den);
}

inline Statevector to_statevector(int n_qubits, const std::vector<double>& v) {
    Statevector psi;
    psi.n_qubits = n_qubits;
    psi.amplitudes.resize(v.size());
    double nrm = 0.0;
    for (double a : v) nrm += a * a;
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < v.size(); ++i) psi.amplitudes[i] = v[i] / nrm;
    return psi;
}

}  // namespace detail

inline constexpr int dense_ed_max_qubits = 14;

// Lowest eigenpair by full real-symmetric diagonalization.
inline EdResult ground_state_dense(const LatticeGeometry& geom, double x) {
    if (geom.n_qubits > dense_ed_max_qubits) {
        throw std::invalid_argument("dense diagonalization supports at most " +
                                    std::to_string(dense_ed_max_qubits) + " qubits, got " +
                                    std::to_string(geom.n_qubits));
    }
    const TcmOperator op(geom, x);
    const lapack_int n = static_cast<lapack_int>(op.dim());

    std::vector<double> h(static_cast<std::size_t>(n) * n, 0.0);
    const std::vector<double>& diag = op.compiled().diagonal();
    for (lapack_int i = 0; i < n; ++i) {
        h[static_cast<std::size_t>(i) * n + i] = diag[i];
    }
    // Column j of H is H e_j; fill the off-diagonal flip entries directly.
    {
        std::vector<double> e(op.dim(), 0.0), col(op.dim());
        for (lapack_int j = 0; j < n; ++j) {
            e[j] = 1.0;
            op.apply(e, col);
            e[j] = 0.0;
            for (lapack_int i = 0; i < n; ++i) {
                if (i != j && col[i] != 0.0) {
                    h[static_cast<std::size_t>(j) * n + i] = col[i];
                }
            }
        }
    }

    std::vector<double> w(n), z(n);
    std::vector<lapack_int> isuppz(2);
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, h.data(), n,
                                           0.0, 0.0, 1, 1, 0.0, &found, w.data(), z.data(), n,
                                           isuppz.data());
    if (info != 0 || found < 1) {
        throw std::runtime_error("dense eigensolver failed with status " + std::to_string(info));
    }

    EdResult result;
    result.energy = w[0];
    result.residual_norm = detail::residual_of(op, z, w[0]);
    result.ground_vector = detail::to_statevector(geom.n_qubits, z);
    return result;
}

namespace detail {

// Basis size the container can afford: large enough that small clusters never
// restart, capped so 2^N-sized vectors fit in a few GB at N = 24.
inline int lanczos_basis_cap(std::size_t dim) {
    constexpr std::size_t budget_bytes = std::size_t{2} * 1024 * 1024 * 1024;
    const std::size_t vec_bytes = dim * sizeof(double);
    const std::size_t fit = budget_bytes / vec_bytes;
    const std::size_t cap = std::clamp<std::size_t>(fit, 8, 64);
    return static_cast<int>(std::min<std::size_t>(cap, dim));
}

}  // namespace detail

// Lanczos with full reorthogonalization against the stored basis, in real
// arithmetic (H_TCM is real symmetric). When the memory-capped basis fills
// before convergence, the iteration thick-restarts from the lowest Ritz
// vectors, so the stored window never exceeds the cap.
inline EdResult ground_state_lanczos(const LatticeGeometry& geom, double x, double tol = 1e-9,
                                     int max_iter = 2000) {
    if (geom.n_qubits > max_statevector_qubits) {
        throw std::invalid_argument("lanczos supports at most " +
                                    std::to_string(max_statevector_qubits) + " qubits, got " +
                                    std::to_string(geom.n_qubits));
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("lanczos tolerance must be positive");
    }
    const TcmOperator op(geom, x);
    const std::size_t d = op.dim();
    const int m = detail::lanczos_basis_cap(d);
    const int keep = std::min(4, m - 2);

    Rng rng(0x5eed5eed5eed5eedULL);
    std::vector<std::vector<double>> basis;
    basis.reserve(m);
    {
        std::vector<double> v0(d);
        double nrm = 0.0;
        for (double& a : v0) {
            a = rng.uniform_unit() - 0.5;
            nrm += a * a;
        }
        nrm = std::sqrt(nrm);
        for (double& a : v0) a /= nrm;
        basis.push_back(std::move(v0));
    }

    // Projected matrix: tridiagonal in a fresh cycle, arrowhead right after a
    // restart. Held dense; it is at most 64 x 64.
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    int nb = 1;  // vectors currently in the basis
    int matvecs = 0;
    double best_residual = std::numeric_limits<double>::infinity();

    std::vector<double> w(d), ground(d);

    auto reorthogonalize = [&](std::vector<double>& vec) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < nb; ++i) {
                double dot = 0.0;
                const std::vector<double>& b = basis[i];
                for (std::size_t idx = 0; idx < d; ++idx) dot += b[idx] * vec[idx];
                for (std::size_t idx = 0; idx < d; ++idx) vec[idx] -= dot * b[idx];
            }
        }
    };

    while (matvecs < max_iter) {
        // Extend the basis until it is full or the budget runs out. On exit,
        // w holds the unnormalized boundary residual (norm beta_boundary)
        // unless the Krylov space closed.
        bool exhausted = false;
        double beta_boundary = 0.0;
        for (;;) {
            const std::vector<double>& v = basis[nb - 1];
            op.apply(v, w);
            ++matvecs;
            double alpha = 0.0;
            for (std::size_t i = 0; i < d; ++i) alpha += v[i] * w[i];
            t(nb - 1, nb - 1) = alpha;
            reorthogonalize(w);
            double beta = 0.0;
            for (double a : w) beta += a * a;
            beta = std::sqrt(beta);
            if (beta < 1e-13) {
                exhausted = true;  // invariant subspace reached
                break;
            }
            if (nb == m || matvecs >= max_iter) {
                beta_boundary = beta;
                break;
            }
            t(nb, nb - 1) = beta;
            t(nb - 1, nb) = beta;
            std::vector<double> next(d);
            for (std::size_t i = 0; i < d; ++i) next[i] = w[i] / beta;
            basis.push_back(std::move(next));
            ++nb;
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t.topLeftCorner(nb, nb));
        if (small.info() != Eigen::Success) {
            throw std::runtime_error("projected eigenproblem failed in lanczos");
        }
        const Eigen::VectorXd& evals = small.eigenvalues();
        const Eigen::MatrixXd& evecs = small.eigenvectors();

        // Explicit residual of the lowest Ritz pair.
        std::fill(ground.begin(), ground.end(), 0.0);
        for (int i = 0; i < nb; ++i) {
            const double coeff = evecs(i, 0);
            const std::vector<double>& b = basis[i];
            for (std::size_t idx = 0; idx < d; ++idx) ground[idx] += coeff * b[idx];
        }
        const double energy = evals(0);
        const double residual = detail::residual_of(op, ground, energy);
        ++matvecs;
        best_residual = std::min(best_residual, residual);
        if (residual <= tol) {
            EdResult result;
            result.energy = energy;
            result.iterations = matvecs;
            result.residual_norm = residual;
            result.ground_vector = detail::to_statevector(geom.n_qubits, ground);
            return result;
        }
        if (matvecs >= max_iter) break;

        // Thick restart: keep the lowest Ritz vectors plus the next Lanczos
        // direction; the projected matrix becomes diag(ritz) with an arrow
        // column coupling them to the new direction. If the Krylov space
        // closed, a fresh random direction (zero coupling) reopens it.
        const int k = std::min(keep, nb - 1);
        std::vector<std::vector<double>> kept;
        kept.reserve(k + 1);
        for (int j = 0; j < k; ++j) {
            std::vector<double> y(d, 0.0);
            for (int i = 0; i < nb; ++i) {
                const double coeff = evecs(i, j);
                const std::vector<double>& b = basis[i];
                for (std::size_t idx = 0; idx < d; ++idx) y[idx] += coeff * b[idx];
            }
            kept.push_back(std::move(y));
        }

        std::vector<double> arrow(k, 0.0);
        std::vector<double> next(d);
        if (!exhausted) {
            for (int j = 0; j < k; ++j) arrow[j] = beta_boundary * evecs(nb - 1, j);
            for (std::size_t i = 0; i < d; ++i) next[i] = w[i] / beta_boundary;
        } else {
            for (double& a : next) a = rng.uniform_unit() - 0.5;
            std::swap(basis, kept);  // orthogonalize against the kept block
            const int nb_saved = nb;
            nb = k;
            reorthogonalize(next);
            nb = nb_saved;
            std::swap(basis, kept);
            double nrm = 0.0;
            for (double a : next) nrm += a * a;
            nrm = std::sqrt(nrm);
            if (nrm < 1e-13) break;
            for (double& a : next) a /= nrm;
        }

        basis = std::move(kept);
        basis.push_back(std::move(next));
        nb = k + 1;
        t.setZero();
        for (int j = 0; j < k; ++j) {
            t(j, j) = evals(j);
            t(j, k) = arrow[j];
            t(k, j) = arrow[j];
        }
    }

    throw std::runtime_error("lanczos did not converge within " + std::to_string(max_iter) +
                             " matrix applications; best residual " +
                             std::to_string(best_residual));
}

// Solver choice for production sweeps: dense for tiny clusters, otherwise the
// matrix-free path.
inline EdResult ed_ground_state(const LatticeGeometry& geom, double x) {
    if (geom.n_qubits <= 10) {
        return ground_state_dense(geom, x);
    }
    return ground_state_lanczos(geom, x);
}

}  // namespace plgc
