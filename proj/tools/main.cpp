#include "cli.hpp"

int main(int argc, char** argv) { return gbht::cli::run(argc, argv); }
