// qotto command-line runner: `qotto run <config>` sweeps engine diagnostics
// to CSV, `qotto dist <config>` dumps a work distribution.

#include "qotto/runner.hpp"

#include <cstring>
#include <iostream>
#include <string>

namespace {

int usage(std::ostream& os, int code) {
  os << "usage: qotto <run|dist> <config-path>\n"
        "\n"
        "  run   evaluate the configured sweep and write the dataset CSV\n"
        "  dist  render the configured work distribution as CSV\n"
        "\n"
        "Configs are flat `key = value` files; see README.md for the key list.\n"
        "QOTTO_THREADS=N evaluates sweep points on N threads (default 1).\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 2 && (std::strcmp(argv[1], "-h") == 0 || std::strcmp(argv[1], "--help") == 0)) {
    return usage(std::cout, 0);
  }
  if (argc != 3) return usage(std::cerr, 2);
  const std::string mode = argv[1];
  try {
    const qotto::RunConfig config = qotto::parse_config_file(argv[2]);
    if (mode == "run") {
      qotto::run_sweep(config);
    } else if (mode == "dist") {
      qotto::emit_distribution(config);
    } else {
      return usage(std::cerr, 2);
    }
  } catch (const std::exception& e) {
    std::cerr << "qotto: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
