#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "arcline/raster.hpp"

namespace testutil {

inline arcline::BinaryImage filled_rect(int size, int x0, int y0, int x1, int y1) {
    arcline::BinaryImage img(size, size);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) img.set(x, y, true);
    return img;
}

inline arcline::BinaryImage filled_disk(int size, double cx, double cy, double r) {
    arcline::BinaryImage img(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r * r) img.set(x, y, true);
        }
    return img;
}

class TempFile {
public:
    explicit TempFile(const std::string& name) {
        path_ = (std::filesystem::temp_directory_path() / ("arcline_test_" + name)).string();
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

    void write(const std::string& content) {
        std::ofstream out(path_, std::ios::binary);
        out << content;
    }

private:
    std::string path_;
};

}  // namespace testutil
