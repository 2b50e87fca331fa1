#include "ltedci/cli.hpp"

int main(int argc, char** argv) { return ltedci::runCli(argc, argv); }
