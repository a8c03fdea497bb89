#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mapoi {

/// Flat `key = value` text with `[section]` headers and `#` comments.
/// Every entry remembers its source line so validation errors can point at it.
/// Keys are addressed as "section.key"; keys before any header live in "".
class KeyValueDocument {
public:
    struct Entry {
        std::string value;
        int line = 0;
        bool used = false;
    };

    static KeyValueDocument parse(const std::string& text, std::string source = "<string>");
    static KeyValueDocument load(const std::filesystem::path& path);

    const std::string& source() const { return source_; }

    bool has(const std::string& key) const;
    std::optional<std::string> get_string(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<std::int64_t> get_int(const std::string& key) const;
    std::optional<std::uint64_t> get_u64(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;
    std::optional<std::vector<double>> get_doubles(const std::string& key) const;

    /// Keys in `section` in file order (without the section prefix).
    std::vector<std::string> keys_in(const std::string& section) const;

    /// Line of `key`, 0 if absent.
    int line_of(const std::string& key) const;

    /// Throws ConfigError naming the first key no getter consumed.
    void reject_unused() const;

    /// ConfigError formatted as "source:line: message".
    [[noreturn]] void fail(const std::string& key, const std::string& message) const;

private:
    const Entry* find(const std::string& key) const;

    std::string source_;
    mutable std::map<std::string, Entry> entries_;
    std::vector<std::string> order_;
};

}  // namespace mapoi
