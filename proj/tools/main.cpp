#include "cli.hpp"

int main(int argc, char** argv) { return invsynth::cli::run(argc, argv); }
