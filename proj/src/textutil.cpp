#include "improver/textutil.hpp"

#include <cctype>
#include <fstream>
#include <system_error>

#include "improver/errors.hpp"

namespace improver {

std::string normalize_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool inRun = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            inRun = true;
            continue;
        }
        if (inRun && !out.empty()) out.push_back(' ');
        inRun = false;
        out.push_back(c);
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) throw DataError("cannot open file: " + path.string());
    std::string out;
    in.seekg(0, std::ios::end);
    const auto len = in.tellg();
    if (len > 0) {
        out.resize(static_cast<std::size_t>(len));
        in.seekg(0, std::ios::beg);
        in.read(out.data(), static_cast<std::streamsize>(out.size()));
    }
    if (in.bad()) throw DataError("read failed: " + path.string());
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out.is_open()) throw DataError("cannot open file for write: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out.good()) throw DataError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw DataError("rename failed: " + tmp.string() + " -> " + path.string() + ": " + ec.message());
}

}  // namespace improver
