#include "vmm/cli.hpp"

int main(int argc, char** argv) {
    return vmm::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
