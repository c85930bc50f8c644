#include "cli.hpp"

int main(int argc, char** argv) { return cepclust::cli::run(argc, argv); }
