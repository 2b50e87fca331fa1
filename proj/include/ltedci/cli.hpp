#pragma once

namespace ltedci {

// Command-line front end: generate / decode / report / selftest.
// Returns the process exit status.
int runCli(int argc, char** argv);

}  // namespace ltedci
