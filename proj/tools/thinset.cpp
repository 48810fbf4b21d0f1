#include "thinset/cli.hpp"

int main(int argc, char** argv) { return thinset::cli::run(argc, argv); }
