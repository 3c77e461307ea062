#pragma once

// Locale-independent numeric formatting and atomic CSV emission.
// Data files never contain timestamps; provenance goes to a sidecar.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace foldwave {

// Shortest decimal string that round-trips to the same double.
inline std::string fmt(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

inline std::string fmt(long long x) { return std::to_string(x); }
inline std::string fmt(int x) { return std::to_string(x); }

// Row-oriented CSV builder. Content is held in memory and written
// atomically (temp file + rename) so readers never see partial output.
class CsvWriter {
public:
    explicit CsvWriter(std::string header) { buf_ = std::move(header); buf_ += '\n'; }

    template <class... Ts>
    void row(const Ts&... fields) {
        bool first = true;
        ((buf_ += (first ? (first = false, "") : ","), buf_ += field_str(fields)), ...);
        buf_ += '\n';
    }

    const std::string& content() const { return buf_; }

    void write(const std::filesystem::path& path) const { atomic_write(path, buf_); }

    static void atomic_write(const std::filesystem::path& path, std::string_view data) {
        namespace fs = std::filesystem;
        if (path.has_parent_path()) {
            std::error_code ec;
            fs::create_directories(path.parent_path(), ec);
        }
        fs::path tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
            out.write(data.data(), static_cast<std::streamsize>(data.size()));
            if (!out) throw std::runtime_error("short write to " + tmp.string());
        }
        fs::rename(tmp, path);
    }

private:
    static std::string field_str(const std::string& s) { return s; }
    static std::string field_str(const char* s) { return s; }
    static std::string field_str(double x) { return fmt(x); }
    static std::string field_str(int x) { return fmt(x); }
    static std::string field_str(long long x) { return fmt(x); }
    static std::string field_str(std::size_t x) { return std::to_string(x); }

    std::string buf_;
};

}  // namespace foldwave
