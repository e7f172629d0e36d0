#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace gridbo {

/// Gray-code Sobol sequence (Joe-Kuo direction numbers), dimensions 1..13.
/// Point 0 is the origin; successive points fill the unit cube with low
/// discrepancy.
class SobolSequence {
public:
    static constexpr int kMaxDim = 13;
    static constexpr int kBits = 32;

    explicit SobolSequence(int dim);

    /// Next point of the sequence in [0,1)^dim.
    Eigen::VectorXd next();

    int dim() const { return dim_; }
    std::uint64_t index() const { return index_; }

private:
    int dim_;
    std::uint64_t index_ = 0;
    // direction numbers v_[d][k], scaled to 2^32
    std::uint32_t v_[kMaxDim][kBits];
    std::uint32_t x_[kMaxDim];
};

/// First n Sobol points in [0,1)^dim, one point per row.
Eigen::MatrixXd sobol_points(int n, int dim);

/// First n Sobol points affinely mapped into the box [lo, hi].
Eigen::MatrixXd sobol_points_in_box(int n, const Eigen::VectorXd& lo,
                                    const Eigen::VectorXd& hi);

}  // namespace gridbo
