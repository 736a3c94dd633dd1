// One line per acceptance criterion; exit status 0 only if every line passes.
#include <frlab/acceptance.hpp>

#include <iostream>

int main(int argc, char** argv) {
    std::filesystem::path out = argc > 1 ? argv[1] : "acceptance_out";
    auto sum = frlab::run_acceptance_suite(out, std::cout);
    int failed = 0;
    for (auto& r : sum.results) failed += !r.pass;
    std::cout << (sum.results.size() - failed) << "/" << sum.results.size() << " criteria pass" << std::endl;
    return failed ? 1 : 0;
}
