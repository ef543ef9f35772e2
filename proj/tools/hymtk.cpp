#include "hym/cli.hpp"

int main(int argc, char** argv) { return hym::cli::run(argc, argv); }
