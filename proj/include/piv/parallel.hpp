#pragma once

namespace piv {

/// Selects between the OpenMP kernel and the serial reference loop. Both
/// paths write into pre-assigned output slots, so results are bit-identical.
enum class ExecPolicy { serial, parallel };

inline bool is_parallel(ExecPolicy p) { return p == ExecPolicy::parallel; }

} // namespace piv
