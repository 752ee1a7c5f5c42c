#pragma once

namespace sechprolate {

// Exit codes: 0 success, 2 usage or input error, 3 numerical failure.
int run_cli(int argc, char** argv);

} // namespace sechprolate
