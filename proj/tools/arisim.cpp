// SPDX-License-Identifier: Apache-2.0
//
// arisim command-line front end. Subcommands are wired up in cli.hpp;
// this translation unit only hosts main().

#include "arisim/cli.hpp"

int main(int argc, char** argv) { return arisim::cli_main(argc, argv); }
