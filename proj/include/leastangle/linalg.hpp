#pragma once
#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "error.hpp"

namespace leastangle {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline double soft_threshold(double z, double threshold)
{
    if (z > threshold) return z - threshold;
    if (z < -threshold) return z + threshold;
    return 0.0;
}

inline double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// log(1 + exp(x)) without overflow for large |x|.
inline double log1pexp(double x)
{
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// 1 / (1 + exp(-x)) without overflow for large |x|.
inline double logistic(double x)
{
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/*
 * Cholesky factor L (lower triangular, G = L L^T) of the Gram matrix of an
 * ordered active set, updated in O(k^2) as variables enter and leave.
 */
class UpdatableCholesky {
public:
    int size() const { return static_cast<int>(n_); }

    // Appends a variable with cross products `cross` (against the current
    // members, in order) and squared norm `diag`. Returns false when the new
    // column is numerically dependent on the existing ones.
    bool append(const Vector& cross, double diag, double rel_tol = 1e-10)
    {
        const Index k = n_;
        Vector l = Vector::Zero(k);
        if (k > 0) l = lower().triangularView<Eigen::Lower>().solve(cross);
        const double d2 = diag - l.squaredNorm();
        if (!(d2 > rel_tol * diag)) return false;
        grow(k + 1);
        L_.row(k).head(k) = l.transpose();
        L_(k, k) = std::sqrt(d2);
        n_ = k + 1;
        return true;
    }

    // Removes the variable at position `pos`, restoring triangularity with
    // Givens rotations applied from the right.
    void remove(Index pos)
    {
        const Index k = n_;
        Matrix m(k - 1, k);
        for (Index i = 0, r = 0; i < k; ++i) {
            if (i == pos) continue;
            m.row(r++) = L_.row(i).head(k);
        }
        for (Index i = pos; i < k - 1; ++i) {
            Eigen::JacobiRotation<double> rot;
            rot.makeGivens(m(i, i), m(i, i + 1));
            m.applyOnTheRight(i, i + 1, rot);
            if (m(i, i) < 0.0) m.col(i) = -m.col(i);
        }
        L_.topLeftCorner(k - 1, k - 1) = m.leftCols(k - 1).triangularView<Eigen::Lower>();
        n_ = k - 1;
    }

    // Solves G x = rhs.
    Vector solve(const Vector& rhs) const
    {
        const Matrix l = lower();
        const Vector z = l.triangularView<Eigen::Lower>().solve(rhs);
        return l.triangularView<Eigen::Lower>().transpose().solve(z);
    }

    Matrix lower() const { return L_.topLeftCorner(n_, n_); }

private:
    void grow(Index k)
    {
        if (L_.rows() >= k) return;
        Matrix bigger = Matrix::Zero(2 * k, 2 * k);
        bigger.topLeftCorner(n_, n_) = L_.topLeftCorner(n_, n_);
        L_ = std::move(bigger);
    }

    Matrix L_;
    Index n_ = 0;
};

// Least squares through column-pivoted Householder QR.
inline Vector least_squares(const Matrix& X, const Vector& y)
{
    Eigen::ColPivHouseholderQR<Matrix> qr(X);
    if (qr.rank() < X.cols()) throw numerical_error("least squares: design matrix is rank deficient");
    return qr.solve(y);
}

// FNV-1a over the raw bytes of a sequence of doubles or integers.
class Fingerprint {
public:
    template <class T>
    Fingerprint& add(const T* data, std::size_t count)
    {
        const auto* bytes = reinterpret_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < count * sizeof(T); ++i) {
            hash_ ^= bytes[i];
            hash_ *= 0x100000001b3ULL;
        }
        return *this;
    }
    template <class T>
    Fingerprint& add(const std::vector<T>& v) { return add(v.data(), v.size()); }
    Fingerprint& add(const Matrix& m) { return add(m.data(), static_cast<std::size_t>(m.size())); }
    Fingerprint& add(const Vector& v) { return add(v.data(), static_cast<std::size_t>(v.size())); }

    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

} // namespace leastangle
