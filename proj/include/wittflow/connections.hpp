#pragma once

// Modules with connection over the Laurent algebra: Frobenius pullback of a
// connection, the Taylor-series transport comparing two Frobenius lifts, and
// flat-basis search. The connection matrix convention is
// nabla(e_j) = sum_i e_i Theta_ij dt, so on coordinate columns
// nabla_{d/dt}(v) = dv/dt + Theta v.

#include <optional>
#include <string>

#include "wittflow/laurent.hpp"

namespace wittflow {

// Raised by the p = 2 transport when the series fails to terminate within
// the configured bound.
class NonTerminatingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModuleWithConnection {
    LaurentAlgebraPtr base;
    i64 rank = 0;
    LaurentMat theta;  // rank x rank

    static ModuleWithConnection flat(const LaurentAlgebraPtr& alg, i64 rank);
};

// nabla_{d/dt} on coordinate columns (given as a rank x k matrix).
LaurentMat nabla_apply(const ModuleWithConnection& M, const LaurentMat& columns);

// Pullback F*M: on 1 (x) e_j the connection matrix becomes
// (dF(t)/dt) * F(Theta); the derivative's p-divisibility keeps everything
// integral.
ModuleWithConnection frobenius_pullback_connection(const ModuleWithConnection& M, const FrobeniusLift& F);

// s-fold pullback.
ModuleWithConnection frobenius_pullback_connection_pow(const ModuleWithConnection& M,
                                                       const FrobeniusLift& F, i64 s);

// The unique connection on a flow's bundle making psi: F^{*f}E -> E
// horizontal: Theta A = A * (dF^f/dt) F^f(Theta) - dA/dt, solved by p-adic
// fixed-point iteration.
LaurentMat canonical_connection(const LaurentMat& A, const FrobeniusLift& F, i64 period);

enum class NablaConvention {
    kElementItself,    // nabla-powers of the element at full level
    kLiftOfReduction,  // nabla-powers of a lift of the mod p^{n-1} reduction
};

// Matrix of sigma: F^{*s}M -> F'^{*s}M,
//   1 (x) x  |->  sum_m (F^s(t) - F'^s(t))^m / m!  (x)  nabla^m(x),
// expressed in the standard bases. Terminates p-adically for p >= 3; for
// p = 2 relies on the mod-p flat basis making nabla^m vanish, with
// `term_bound` as the contract.
LaurentMat taylor_transport(const ModuleWithConnection& M, const FrobeniusLift& F,
                            const FrobeniusLift& Fprime, i64 s,
                            NablaConvention convention = NablaConvention::kElementItself,
                            i64 term_bound = 64);

struct FlatBasisResult {
    bool found = false;
    LaurentMat basis;  // columns are flat sections forming a module basis
    std::string reason;
};

// Searches for a basis of nabla-flat sections with support in
// [-window, window], by exact kernel computation over W_n(F_q) followed by
// invertible-subset extraction.
FlatBasisResult flat_sections(const ModuleWithConnection& M, i64 window = 0);

}  // namespace wittflow
