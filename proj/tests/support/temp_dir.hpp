#pragma once

#include <filesystem>
#include <random>
#include <string>

namespace testsupport {

// Unique scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        std::mt19937_64 gen(rd());
        for (int tries = 0; tries < 16; ++tries) {
            char suffix[24];
            std::snprintf(suffix, sizeof(suffix), "%016llx",
                          static_cast<unsigned long long>(gen()));
            auto candidate =
                std::filesystem::temp_directory_path() / (tag + "-" + suffix);
            std::error_code ec;
            if (std::filesystem::create_directories(candidate, ec) && !ec) {
                path = candidate;
                return;
            }
        }
        throw std::runtime_error("TempDir: cannot create scratch directory");
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path operator/(const std::string& name) const {
        return path / name;
    }
};

}  // namespace testsupport
