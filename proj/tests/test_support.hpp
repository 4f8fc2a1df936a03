// Copyright 2026 The qnfauth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace qnf::testing {

// Scratch directory removed on destruction.
class TempDir {
   public:
    explicit TempDir(const std::string &tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("qnf-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    const std::filesystem::path &path() const { return path_; }
    std::string operator/(const std::string &leaf) const { return (path_ / leaf).string(); }

   private:
    std::filesystem::path path_;
};

// Strictly positive random distribution of the given length.
inline std::vector<double> random_positive_distribution(std::mt19937_64 &rng, size_t size) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> p(size);
    double total = 0.0;
    for (auto &x : p) total += (x = u(rng));
    for (auto &x : p) x /= total;
    return p;
}

}  // namespace qnf::testing
