#include "tribilliard/cli.hpp"

int main(int argc, char** argv) { return tribilliard::cli_dispatch(argc, argv); }
