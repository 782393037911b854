#pragma once

// Maximum-entropy continuous ensembles of pure quantum states: given a
// density matrix ρ, the solver finds the Hermitian B with
// ∫ e^{-⟨φ|B|φ⟩} |φ⟩⟨φ| dφ / Z(B) = ρ, along with exact sampling from the
// resulting distribution and the classical Gibbs-die counterpart.

#include "lazyens/density.hpp"
#include "lazyens/divided_difference.hpp"
#include "lazyens/eigen.hpp"
#include "lazyens/ensemble.hpp"
#include "lazyens/errors.hpp"
#include "lazyens/matrix.hpp"
#include "lazyens/matrix_json.hpp"
#include "lazyens/maxent_die.hpp"
#include "lazyens/partition.hpp"
#include "lazyens/rng.hpp"
#include "lazyens/sampler.hpp"
#include "lazyens/solver.hpp"
