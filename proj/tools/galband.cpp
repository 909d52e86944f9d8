#include <string>
#include <vector>

#include "galband/cli.hpp"

int main(int argc, char** argv) {
    return galband::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
