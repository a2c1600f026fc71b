#include "qflk/cli.hpp"

int main(int argc, char** argv) { return qflk::cli::cli_main(argc, argv); }
