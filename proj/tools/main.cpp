#include "sheafstrata/cli.hpp"

int main(int argc, char** argv) { return sheafstrata::cli::run(argc, argv); }
