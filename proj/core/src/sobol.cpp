#include "gridbo/sobol.hpp"

#include <bit>
#include <stdexcept>

namespace gridbo {

namespace {

struct JoeKuoRow {
    int s;               // polynomial degree
    std::uint32_t a;     // polynomial coefficients (interior bits)
    std::uint32_t m[6];  // initial direction integers
};

// Rows for dimensions 2..13 of the new-joe-kuo-6 table.
constexpr JoeKuoRow kJoeKuo[] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
};

}  // namespace

SobolSequence::SobolSequence(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) {
        throw std::invalid_argument("SobolSequence: dimension must be in [1, " +
                                    std::to_string(kMaxDim) + "]");
    }
    // first dimension: van der Corput
    for (int k = 0; k < kBits; ++k) v_[0][k] = 1u << (31 - k);
    for (int d = 1; d < dim_; ++d) {
        const JoeKuoRow& row = kJoeKuo[d - 1];
        const int s = row.s;
        std::uint32_t m[kBits];
        for (int k = 0; k < s; ++k) m[k] = row.m[k];
        for (int k = s; k < kBits; ++k) {
            std::uint32_t mk = m[k - s] ^ (m[k - s] << s);
            for (int i = 1; i < s; ++i) {
                if ((row.a >> (s - 1 - i)) & 1u) mk ^= m[k - i] << i;
            }
            m[k] = mk;
        }
        for (int k = 0; k < kBits; ++k) v_[d][k] = m[k] << (31 - k);
    }
    for (int d = 0; d < dim_; ++d) x_[d] = 0;
}

Eigen::VectorXd SobolSequence::next() {
    Eigen::VectorXd out(dim_);
    if (index_ == 0) {
        out.setZero();
        ++index_;
        return out;
    }
    const int c = std::countr_zero(index_);  // gray-code bit flip
    for (int d = 0; d < dim_; ++d) {
        x_[d] ^= v_[d][c];
        out[d] = static_cast<double>(x_[d]) * 0x1.0p-32;
    }
    ++index_;
    return out;
}

Eigen::MatrixXd sobol_points(int n, int dim) {
    SobolSequence seq(dim);
    Eigen::MatrixXd pts(n, dim);
    for (int i = 0; i < n; ++i) pts.row(i) = seq.next();
    return pts;
}

Eigen::MatrixXd sobol_points_in_box(int n, const Eigen::VectorXd& lo,
                                    const Eigen::VectorXd& hi) {
    Eigen::MatrixXd pts = sobol_points(n, static_cast<int>(lo.size()));
    for (int j = 0; j < lo.size(); ++j) {
        pts.col(j) = (lo[j] + (hi[j] - lo[j]) * pts.col(j).array()).matrix();
    }
    return pts;
}

}  // namespace gridbo
