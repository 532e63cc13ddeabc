#include "virtperm/cli.hpp"

int main(int argc, char** argv) {
  return virtperm::run_cli({argv + 1, argv + argc});
}
