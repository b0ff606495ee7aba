#include "cavnet/qops.hpp"

namespace cavnet {

CMat tensor(const CMat& a, const CMat& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols())
        throw ValidationError("tensor: operands must be square");
    const Eigen::Index n = a.rows(), m = b.rows();
    CMat out(n * m, n * m);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out.block(i * m, j * m, m, m) = a(i, j) * b;
    return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(a.layout.joined(b.layout), tensor(a.entries, b.entries));
}

CMat embed(const CMat& op, const HilbertLayout& layout, std::size_t subsystem) {
    if (subsystem >= layout.subsystems())
        throw ValidationError("embed: subsystem index out of range");
    if (op.rows() != layout.dim(subsystem))
        throw ValidationError("embed: operator dimension does not match subsystem");
    CMat out = CMat::Identity(1, 1);
    for (std::size_t s = 0; s < layout.subsystems(); ++s) {
        out = (s == subsystem) ? tensor(out, op)
                               : tensor(out, CMat(CMat::Identity(layout.dim(s), layout.dim(s))));
    }
    return out;
}

CMat partial_trace(const CMat& m, const HilbertLayout& layout, const std::set<std::size_t>& keep) {
    if (keep.empty()) throw ValidationError("partial_trace: keep set must be nonempty");
    for (std::size_t k : keep)
        if (k >= layout.subsystems()) throw ValidationError("partial_trace: invalid subsystem index");
    if (m.rows() != layout.total_dim() || m.cols() != layout.total_dim())
        throw ValidationError("partial_trace: matrix does not match layout");

    const std::size_t ns = layout.subsystems();
    std::vector<int> kept, traced;
    for (std::size_t s = 0; s < ns; ++s)
        (keep.count(s) ? kept : traced).push_back(static_cast<int>(s));

    // Row-major strides of each subsystem in the full index.
    std::vector<long> stride(ns, 1);
    for (std::size_t s = ns; s-- > 1;) stride[s - 1] = stride[s] * layout.dim(s);

    long dim_keep = 1, dim_tr = 1;
    for (int s : kept) dim_keep *= layout.dim(s);
    for (int s : traced) dim_tr *= layout.dim(s);

    // Enumerate multi-indices of kept/traced groups, composing full indices.
    auto full_index = [&](long kidx, long tidx) {
        long idx = 0;
        long rem = kidx;
        for (std::size_t p = kept.size(); p-- > 0;) {
            const int d = layout.dim(kept[p]);
            idx += (rem % d) * stride[kept[p]];
            rem /= d;
        }
        rem = tidx;
        for (std::size_t p = traced.size(); p-- > 0;) {
            const int d = layout.dim(traced[p]);
            idx += (rem % d) * stride[traced[p]];
            rem /= d;
        }
        return idx;
    };

    CMat out = CMat::Zero(dim_keep, dim_keep);
    for (long i = 0; i < dim_keep; ++i)
        for (long j = 0; j < dim_keep; ++j) {
            Complex acc = 0.0;
            for (long t = 0; t < dim_tr; ++t) acc += m(full_index(i, t), full_index(j, t));
            out(i, j) = acc;
        }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<std::size_t>& keep) {
    std::vector<int> kept_dims;
    for (std::size_t s = 0; s < rho.layout.subsystems(); ++s)
        if (keep.count(s)) kept_dims.push_back(rho.layout.dim(s));
    return DensityMatrix(HilbertLayout(kept_dims), partial_trace(rho.entries, rho.layout, keep));
}

CMat identity(int dim) { return CMat::Identity(dim, dim); }

CMat sigma_minus() {
    CMat m = CMat::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

CMat sigma_plus() {
    CMat m = CMat::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

CMat sigma_z() {
    CMat m = CMat::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

CMat annihilation(int fock_dim) {
    CMat m = CMat::Zero(fock_dim, fock_dim);
    for (int n = 1; n < fock_dim; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
    return m;
}

} // namespace cavnet
