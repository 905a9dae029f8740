// One line per acceptance criterion; exit status 1 if any fails.
#include "helm/suites.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

int main(int argc, char** argv)
{
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            ids.push_back(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: acceptance [--only N]...\n");
            return 2;
        }
    }
    if (ids.empty())
        for (int i = 1; i <= helm::criterion_count; ++i) ids.push_back(i);

    bool all = true;
    for (int id : ids) {
        helm::CriterionResult const r = helm::run_criterion(id);
        std::printf("%s [%d] %s: %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
        std::fflush(stdout);
        all = all && r.passed;
    }
    return all ? 0 : 1;
}
