#ifndef QFLK_CLI_HPP
#define QFLK_CLI_HPP

namespace qflk::cli {

/// Entry point of the command-line tool. Exit codes: 0 success, 2
/// configuration error, 3 numerical failure (partial outputs retained).
int cli_main(int argc, char** argv);

}  // namespace qflk::cli

#endif
