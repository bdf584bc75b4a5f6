#pragma once

// Command-line entry point; see run_cli for the dispatch table.

namespace koszulkit {

int run_cli(int argc, char** argv);

}  // namespace koszulkit
