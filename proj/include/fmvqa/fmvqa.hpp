#pragma once

// Umbrella header: surrogate training, Hamiltonian assembly, simulation,
// variational solvers, refinement, and the CLI pipeline.

#include "fmvqa/ansatz.hpp"
#include "fmvqa/binsearch.hpp"
#include "fmvqa/bits.hpp"
#include "fmvqa/circuit.hpp"
#include "fmvqa/cobyla.hpp"
#include "fmvqa/dataset.hpp"
#include "fmvqa/fm.hpp"
#include "fmvqa/ising.hpp"
#include "fmvqa/mitigation.hpp"
#include "fmvqa/qubo.hpp"
#include "fmvqa/rng.hpp"
#include "fmvqa/serialize.hpp"
#include "fmvqa/statevector.hpp"
#include "fmvqa/vqa.hpp"
