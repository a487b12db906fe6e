#include "errdist/commands.hpp"

int main(int argc, char** argv) { return errdist::cli::run(argc, argv); }
