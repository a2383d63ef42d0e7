#pragma once

namespace ebmod {

// Sampling kernels come in two flavours: a serial reference path and an
// OpenMP path with a deterministic merge.  Results are bit-identical.
enum class Exec { Serial, Parallel };

}  // namespace ebmod
