#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chowrobbins::cli {

inline constexpr const char* kSchema = "chowrobbins/1";
inline constexpr const char* kThreadsEnv = "CHOWROBBINS_THREADS";

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kDomain = 3,
    kConvergence = 4,
};

// args[0] is the program name. Results go to `out`; usage text, errors and
// progress go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chowrobbins::cli
