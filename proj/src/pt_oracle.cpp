#include "pptqmc/pt_oracle.hpp"

namespace pptqmc::oracle {

ComplexMatrix naive_partial_transpose(const ComplexMatrix& rho, int n, int k, Subsystem which) {
    ComplexMatrix out(n * k, n * k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            for (int p = 0; p < n; ++p)
                for (int l = 0; l < k; ++l) {
                    const int row = i * k + j, col = p * k + l;
                    out(row, col) = which == Subsystem::B ? rho(i * k + l, p * k + j)
                                                          : rho(p * k + j, i * k + l);
                }
    return out;
}

ComplexMatrix naive_partial_transpose(const ComplexMatrix& rho, const Split& split) {
    const auto [n, k] = split.reading();
    return naive_partial_transpose(rho, n, k, Subsystem::B);
}

}  // namespace pptqmc::oracle
