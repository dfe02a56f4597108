/*******************************************************************************
 * @file:   commands.h
 * @brief:  Entry point of the batchcut command-line tool.
 *
 * Exit codes: 0 success, 1 runtime error, 2 usage error.
 ******************************************************************************/
#pragma once

#include <iosfwd>

namespace batchcut::cli {

inline constexpr int kExitOk      = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage   = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace batchcut::cli
