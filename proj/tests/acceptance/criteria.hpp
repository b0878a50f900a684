#pragma once

#include <string>
#include <vector>

namespace acceptance {

struct Outcome {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string measured;
    double seconds = 0;
    double limit = 0;  // wall-clock budget in seconds
};

Outcome run_criterion(int id);
std::vector<int> all_criteria();

}  // namespace acceptance
