#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "mg/error.hpp"

namespace testutil {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mg::Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string test_data(const std::string& name) { return slurp(std::string(MG_TEST_DATA) + "/" + name); }

}  // namespace testutil
