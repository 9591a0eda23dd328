#include "endospin/cli.hpp"

int main(int argc, char** argv) { return endospin::cli::dispatch(argc, argv); }
