#ifndef NOONSIM_SPARSE_HPP
#define NOONSIM_SPARSE_HPP

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "noonsim/errors.hpp"

namespace noonsim {

using Complex = std::complex<double>;

// Complex sparse matrix in CSR form, assembled once from coordinate
// triplets (duplicates are summed).  Square by construction.
class SparseOperator {
public:
    struct Triplet {
        std::size_t row, col;
        Complex value;
    };

    SparseOperator() = default;

    SparseOperator(std::size_t dim, std::vector<Triplet> triplets, bool hermitian = false)
        : m_dim(dim), m_hermitian(hermitian) {
        std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        m_row_ptr.assign(dim + 1, 0);
        for (std::size_t i = 0; i < triplets.size();) {
            std::size_t j = i + 1;
            Complex v = triplets[i].value;
            while (j < triplets.size() && triplets[j].row == triplets[i].row &&
                   triplets[j].col == triplets[i].col) {
                v += triplets[j].value;
                ++j;
            }
            if (triplets[i].row >= dim || triplets[i].col >= dim)
                throw DimensionMismatchError("SparseOperator: entry outside dimension");
            if (v != Complex(0.0, 0.0)) {
                m_cols.push_back(triplets[i].col);
                m_values.push_back(v);
                ++m_row_ptr[triplets[i].row + 1];
            }
            i = j;
        }
        for (std::size_t r = 0; r < dim; ++r) m_row_ptr[r + 1] += m_row_ptr[r];
    }

    std::size_t dimension() const { return m_dim; }
    std::size_t nonzeros() const { return m_values.size(); }
    bool hermitian_flag() const { return m_hermitian; }

    // y += c * A x; x and y may be any complex Eigen vector expressions
    // (including segment views of a stacked state).
    template <typename VecIn, typename VecOut>
    void accumulate(const VecIn& x, VecOut&& y, Complex c) const {
        if (std::size_t(x.size()) != m_dim || std::size_t(y.size()) != m_dim)
            throw DimensionMismatchError("SparseOperator::accumulate: size mismatch");
        for (std::size_t r = 0; r < m_dim; ++r) {
            Complex acc(0.0, 0.0);
            for (std::size_t k = m_row_ptr[r]; k < m_row_ptr[r + 1]; ++k)
                acc += m_values[k] * x[Eigen::Index(m_cols[k])];
            y[Eigen::Index(r)] += c * acc;
        }
    }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const {
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(Eigen::Index(m_dim));
        accumulate(x, y, Complex(1.0, 0.0));
        return y;
    }

    Eigen::MatrixXcd dense() const {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(Eigen::Index(m_dim), Eigen::Index(m_dim));
        for (std::size_t r = 0; r < m_dim; ++r)
            for (std::size_t k = m_row_ptr[r]; k < m_row_ptr[r + 1]; ++k)
                m(Eigen::Index(r), Eigen::Index(m_cols[k])) += m_values[k];
        return m;
    }

    // max |A - A^dagger| entry; 0 for an exactly Hermitian assembly.
    double hermiticity_defect() const {
        Eigen::MatrixXcd m = dense();
        return (m - m.adjoint()).cwiseAbs().maxCoeff();
    }

    // Largest row-sum norm, a cheap upper bound for the spectral norm.
    double norm_bound() const {
        double best = 0.0;
        for (std::size_t r = 0; r < m_dim; ++r) {
            double s = 0.0;
            for (std::size_t k = m_row_ptr[r]; k < m_row_ptr[r + 1]; ++k) s += std::abs(m_values[k]);
            best = std::max(best, s);
        }
        return best;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t r = 0; r < m_dim; ++r)
            for (std::size_t k = m_row_ptr[r]; k < m_row_ptr[r + 1]; ++k)
                f(r, m_cols[k], m_values[k]);
    }

private:
    std::size_t m_dim = 0;
    bool m_hermitian = false;
    std::vector<std::size_t> m_row_ptr{0};
    std::vector<std::size_t> m_cols;
    std::vector<Complex> m_values;
};

}

#endif
