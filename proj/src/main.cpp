// SPDX-License-Identifier: MIT
#include "peridyn/config.hpp"

int main(int argc, char** argv) { return peridyn::run_cli(argc, argv); }
