// Command-line front end. Exit codes: 0 harmonic / generated, 1 usage or
// input error, 2 inharmonic, 3 generation failed.
#pragma once

#include <ostream>

namespace chromaharmony {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInharmonic = 2;
inline constexpr int kExitGenerationFailed = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chromaharmony
