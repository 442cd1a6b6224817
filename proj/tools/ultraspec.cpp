#include "ultraspec/cli.hpp"

int main(int argc, char** argv) { return ultraspec::cli::main(argc, argv); }
