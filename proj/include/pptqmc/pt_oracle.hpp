#pragma once

#include "pptqmc/criteria.hpp"

namespace pptqmc::oracle {

/// Reference partial transpose written entry by entry on the tensor indices,
/// independent of the block layout used by partial_transpose. For reading
/// n (x) k and second factor: out[(i,j),(p,l)] = rho[(i,l),(p,j)].
ComplexMatrix naive_partial_transpose(const ComplexMatrix& rho, int n, int k, Subsystem which);

/// Same, dispatched on a Split's convention.
ComplexMatrix naive_partial_transpose(const ComplexMatrix& rho, const Split& split);

}  // namespace pptqmc::oracle
