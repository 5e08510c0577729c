#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "slag/common.hpp"

namespace slag {

// Realization of integer root-lattice keys as real frequency vectors.
// Column j of `basis` holds the values (beta_j(e_1), ..., beta_j(e_r)) of the
// j-th simple root on the orthonormal section basis.  Every row of the basis
// is an integer row times one real scale, basis[i][j] = scale[i]*ints[i][j];
// that factorization is what lets the degenerate (zero-frequency) branch of
// the antiderivative be decided exactly on the lattice instead of by a
// floating-point comparison.
class FrequencyFrame {
  public:
    FrequencyFrame() = default;

    FrequencyFrame(int rank, std::vector<std::vector<double>> basis)
        : rank_(rank), basis_(std::move(basis)) {
        check_shape();
        rationalize();
    }

    FrequencyFrame(int rank, std::vector<std::vector<double>> basis,
                   std::vector<double> scale,
                   std::vector<std::vector<std::int64_t>> ints)
        : rank_(rank),
          basis_(std::move(basis)),
          scale_(std::move(scale)),
          ints_(std::move(ints)) {
        check_shape();
    }

    static FrequencyFrame a2() {
        const double s3 = std::sqrt(3.0);
        return FrequencyFrame(2, {{2.0, -1.0}, {0.0, s3}}, {1.0, s3},
                              {{2, -1}, {0, 1}});
    }
    static FrequencyFrame b2() {
        return FrequencyFrame(2, {{1.0, -1.0}, {0.0, 1.0}}, {1.0, 1.0},
                              {{1, -1}, {0, 1}});
    }
    static FrequencyFrame g2() {
        const double s3 = std::sqrt(3.0);
        return FrequencyFrame(2, {{2.0 * s3, -s3}, {0.0, 1.0}}, {s3, 1.0},
                              {{2, -1}, {0, 1}});
    }
    static FrequencyFrame rank1(double four_c = 4.0) {
        const double sc = std::sqrt(four_c / 4.0);
        return FrequencyFrame(1, {{sc}}, {sc}, {{1}});
    }

    int rank() const { return rank_; }
    const std::vector<std::vector<double>>& basis() const { return basis_; }

    // realized frequency vector B * lattice
    std::vector<double> frequency(const std::vector<int>& lattice) const {
        if (static_cast<int>(lattice.size()) != rank_)
            throw domain_error("lattice length " +
                               std::to_string(lattice.size()) +
                               " does not match frame rank " +
                               std::to_string(rank_));
        std::vector<double> out(rank_, 0.0);
        for (int i = 0; i < rank_; ++i)
            for (int j = 0; j < rank_; ++j)
                out[i] += basis_[i][j] * lattice[j];
        return out;
    }

    // exact test of (B*lattice)_axis == 0, decided on the integer structure
    bool frequency_component_is_zero(const std::vector<int>& lattice,
                                     int axis) const {
        std::int64_t acc = 0;
        for (int j = 0; j < rank_; ++j)
            acc += ints_[axis][j] * static_cast<std::int64_t>(lattice[j]);
        return acc == 0;
    }

    bool operator==(const FrequencyFrame& o) const {
        return rank_ == o.rank_ && basis_ == o.basis_;
    }
    bool operator!=(const FrequencyFrame& o) const { return !(*this == o); }

  private:
    void check_shape() {
        if (rank_ < 1 || rank_ > 2)
            throw validation_error("frame rank must be 1 or 2, got " +
                                   std::to_string(rank_));
        if (static_cast<int>(basis_.size()) != rank_)
            throw validation_error("frame basis row count != rank");
        for (auto& row : basis_)
            if (static_cast<int>(row.size()) != rank_)
                throw validation_error("frame basis is not square");
        // invertibility
        double det = rank_ == 1 ? basis_[0][0]
                                : basis_[0][0] * basis_[1][1] -
                                      basis_[0][1] * basis_[1][0];
        if (std::abs(det) < 1e-12)
            throw validation_error("frame basis is singular");
    }

    // recover basis[i][j] = scale[i]*ints[i][j] with small integer entries
    void rationalize() {
        scale_.assign(rank_, 1.0);
        ints_.assign(rank_, std::vector<std::int64_t>(rank_, 0));
        for (int i = 0; i < rank_; ++i) {
            double g = 0.0;
            for (int j = 0; j < rank_; ++j) {
                double a = std::abs(basis_[i][j]);
                if (a > 1e-14 && (g == 0.0 || a < g)) g = a;
            }
            if (g == 0.0)
                throw validation_error("frame basis has an all-zero row");
            bool done = false;
            for (int den = 1; den <= 48 && !done; ++den) {
                double s = g / den;
                done = true;
                for (int j = 0; j < rank_; ++j) {
                    double q = basis_[i][j] / s;
                    if (std::abs(q - std::round(q)) > 1e-9 ||
                        std::abs(q) > 1e6) {
                        done = false;
                        break;
                    }
                }
                if (done) {
                    scale_[i] = s;
                    for (int j = 0; j < rank_; ++j)
                        ints_[i][j] = static_cast<std::int64_t>(
                            std::llround(basis_[i][j] / s));
                }
            }
            if (!done)
                throw validation_error(
                    "frame basis row " + std::to_string(i) +
                    " is not a real scale times small integers");
        }
    }

    int rank_ = 1;
    std::vector<std::vector<double>> basis_;
    std::vector<double> scale_;
    std::vector<std::vector<std::int64_t>> ints_;
};

}  // namespace slag
