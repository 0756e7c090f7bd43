#pragma once

#include <kmob/core/params.hpp>
#include <kmob/core/trace.hpp>

#include <filesystem>
#include <iosfwd>

namespace kmob {

/// A trace together with the parameters from its header line.
struct TraceFile {
    ProblemParams params;
    Trace trace;
};

/// Line-oriented JSON trace format:
///
///     {"dim":1,"k":2,"ms":1,"mc":1,"delta":0.5,"D":1,"start":[[0],[0]]}
///     {"t":1,"r":[0.5]}
///     {"t":1,"o":[[0.5],[0]]}
///
/// The header comes first; request lines ("r") and certificate lines ("o") may be
/// interleaved and carry 1-based step indices that must cover 1..n exactly once.
/// Every point is validated on load. Throws InputError on any malformed content.
[[nodiscard]] TraceFile read_trace(std::istream& in);
[[nodiscard]] TraceFile load_trace(const std::filesystem::path& path);

void write_trace(std::ostream& out, const TraceFile& file);
void save_trace(const std::filesystem::path& path, const TraceFile& file);

} // namespace kmob
