#include <iostream>

#include "driftflux/acceptance.hpp"

int main() {
    const int failures = driftflux::run_acceptance(std::cout);
    return failures == 0 ? 0 : 2;
}
