#include "cli.hpp"

int main(int argc, char** argv) { return rfspec::cli::run(argc, argv); }
