#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <numeric>
#include <vector>

#include "cavnet/errors.hpp"

namespace cavnet {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Ordered list of subsystem dimensions over a tensor-product space.
// Leftmost subsystem varies slowest (standard Kronecker ordering).
class HilbertLayout {
public:
    HilbertLayout() = default;

    explicit HilbertLayout(std::vector<int> dims) : dims_(std::move(dims)) {
        for (int d : dims_) {
            if (d < 2) throw ValidationError("HilbertLayout: every subsystem dim must be >= 2");
        }
        total_ = 1;
        for (int d : dims_) total_ *= d;
    }

    static HilbertLayout qubit() { return HilbertLayout({2}); }

    const std::vector<int>& dims() const { return dims_; }
    int dim(std::size_t i) const { return dims_.at(i); }
    std::size_t subsystems() const { return dims_.size(); }
    int total_dim() const { return total_; }

    // Concatenation, matching the index order produced by tensor().
    HilbertLayout joined(const HilbertLayout& other) const {
        std::vector<int> d = dims_;
        d.insert(d.end(), other.dims_.begin(), other.dims_.end());
        return HilbertLayout(std::move(d));
    }

    bool operator==(const HilbertLayout& o) const { return dims_ == o.dims_; }

private:
    std::vector<int> dims_;
    int total_ = 1;
};

} // namespace cavnet
