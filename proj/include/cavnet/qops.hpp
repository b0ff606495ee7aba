#pragma once

#include <set>
#include <vector>

#include "cavnet/states.hpp"

namespace cavnet {

// Kronecker product, left operand's indices slowest.
CMat tensor(const CMat& a, const CMat& b);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Embed a single-subsystem operator into the composite space:
// I x ... x op x ... x I at position `subsystem`.
CMat embed(const CMat& op, const HilbertLayout& layout, std::size_t subsystem);

// Reduced matrix on the kept subsystems (order preserved). Works on any
// square matrix over the layout; trace is preserved.
CMat partial_trace(const CMat& m, const HilbertLayout& layout, const std::set<std::size_t>& keep);

DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<std::size_t>& keep);

// Elementary operators.
CMat identity(int dim);
CMat sigma_minus();             // |0><1|
CMat sigma_plus();              // |1><0|
CMat sigma_z();                 // diag(1, -1) in (|0>, |1>) order
CMat annihilation(int fock_dim);

} // namespace cavnet
