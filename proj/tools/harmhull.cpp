#include "harmhull/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  const auto result = harmhull::cli::run(args);
  if (result.status == harmhull::cli::Status::error) {
    std::cerr << "error: " << result.message << '\n';
    std::cout << harmhull::cli::render(result.payload) << '\n';
  } else if (!result.text.empty()) {
    std::cout << result.text;
  } else {
    std::cout << harmhull::cli::render(result.payload) << '\n';
  }
  return result.exit_code;
}
