#include "walign/cli.hpp"

int main(int argc, char** argv) { return walign::cli::run(argc, argv); }
