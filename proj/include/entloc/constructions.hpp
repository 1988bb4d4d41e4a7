#pragma once

// Explicit example states: the 8x4x2 locked state and the textbook fixtures
// (Bell, 4x4 maximally entangled, GHZ, W, Werner).

#include <array>

#include "entloc/qcore.hpp"

namespace entloc {

/// Unitaries of the locked state
///
///   |Psi> = 1/2 sum_{x,y} |x>_a (I (x) U_xy)|phi+>_{AB} V_x |y>_C
///
/// with a a qubit, A and B ququarts, and C a qubit. Alice holds a and A.
struct LockedStateSpec {
    std::array<Matrix, 2> v;                 // V_x, 2x2
    std::array<std::array<Matrix, 2>, 2> u;  // U_xy, 4x4, indexed u[x][y]

    /// V_0 = I, V_1 = (I + i sigma_y)/sqrt 2, U_x0 = I, U_01 = diag(i,1,-i,-1), U_11 = diag(i,1,i,1).
    static LockedStateSpec defaults();
    /// Throws ValueError unless all six matrices are unitary within 1e-12.
    void validate() const;
};

/// Party layout [(a,2,A), (A,4,A), (B,4,B), (C,2,Z)].
DimSpec locked_state_dims();
PureState build_locked_state(const LockedStateSpec& spec = LockedStateSpec::defaults());

/// (I + i sigma_y)/sqrt 2 = [[1, 1], [-1, 1]]/sqrt 2.
Matrix paper_v1_matrix();
/// (I + sigma_y)/sqrt 2 taken literally; not unitary.
Matrix paper_v1_literal();
Matrix pauli_y();

/// (|00> + |11>)/sqrt 2 on parties A, B.
PureState bell_state();
/// sum_i |ii>/sqrt d on parties A, B (phi_plus(4) is the 4x4 state of the locked construction).
PureState phi_plus(int dim);
/// (|0...0> + |1...1>)/sqrt 2 on A, B, then Z parties C (n = 3) or C1..C{n-2}.
PureState ghz_state(int n);
/// Uniform superposition of single excitations, same labels as ghz_state.
PureState w_state(int n);
/// p |phi+><phi+| + (1 - p) I/4 on two qubits; p in [0, 1].
DensityOperator werner_state(double p);

/// Labels used by ghz_state / w_state for n parties.
DimSpec qubit_chain_dims(int n);

}  // namespace entloc
