/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef NSD_CLI_HH
#define NSD_CLI_HH

#include <iosfwd>
#include <string>
#include <vector>

namespace nsd
{
    inline constexpr int exit_success = 0;
    inline constexpr int exit_failure = 1;
    inline constexpr int exit_usage = 2;

    /// Runs the command line (args excludes the program name) writing to out and err.
    auto run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int;
}

#endif
