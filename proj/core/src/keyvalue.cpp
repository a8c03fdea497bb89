#include "mapoi/keyvalue.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mapoi/errors.hpp"

namespace mapoi {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string where(const std::string& source, int line) {
    return source + ":" + std::to_string(line) + ": ";
}

}  // namespace

KeyValueDocument KeyValueDocument::parse(const std::string& text, std::string source) {
    KeyValueDocument doc;
    doc.source_ = std::move(source);
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(where(doc.source_, line_no) + "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where(doc.source_, line_no) + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(where(doc.source_, line_no) + "empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (doc.entries_.count(full))
            throw ConfigError(where(doc.source_, line_no) + "duplicate key '" + full + "' (first at line " +
                              std::to_string(doc.entries_.at(full).line) + ")");
        doc.entries_[full] = Entry{trim(line.substr(eq + 1)), line_no, false};
        doc.order_.push_back(full);
    }
    return doc;
}

KeyValueDocument KeyValueDocument::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

const KeyValueDocument::Entry* KeyValueDocument::find(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
}

bool KeyValueDocument::has(const std::string& key) const { return entries_.count(key) != 0; }

int KeyValueDocument::line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
}

void KeyValueDocument::fail(const std::string& key, const std::string& message) const {
    throw ConfigError(where(source_, line_of(key)) + key + ": " + message);
}

std::optional<std::string> KeyValueDocument::get_string(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    return e->value;
}

std::optional<double> KeyValueDocument::get_double(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    try {
        std::size_t pos = 0;
        const double v = std::stod(e->value, &pos);
        if (pos != e->value.size()) fail(key, "trailing characters in number '" + e->value + "'");
        return v;
    } catch (const std::invalid_argument&) {
        fail(key, "expected a number, got '" + e->value + "'");
    } catch (const std::out_of_range&) {
        fail(key, "number out of range '" + e->value + "'");
    }
}

std::optional<std::int64_t> KeyValueDocument::get_int(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    std::int64_t v = 0;
    const auto* b = e->value.data();
    const auto* end = b + e->value.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end) fail(key, "expected an integer, got '" + e->value + "'");
    return v;
}

std::optional<std::uint64_t> KeyValueDocument::get_u64(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    std::uint64_t v = 0;
    const auto* b = e->value.data();
    const auto* end = b + e->value.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end) fail(key, "expected an unsigned integer, got '" + e->value + "'");
    return v;
}

std::optional<bool> KeyValueDocument::get_bool(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
    if (e->value == "false" || e->value == "no" || e->value == "0") return false;
    fail(key, "expected true/false, got '" + e->value + "'");
}

std::optional<std::vector<double>> KeyValueDocument::get_doubles(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    std::string text = e->value;
    for (char& c : text)
        if (c == ',') c = ' ';
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) fail(key, "bad number '" + tok + "'");
        } catch (const std::logic_error&) {
            fail(key, "bad number '" + tok + "'");
        }
    }
    return out;
}

std::vector<std::string> KeyValueDocument::keys_in(const std::string& section) const {
    std::vector<std::string> out;
    const std::string prefix = section.empty() ? "" : section + ".";
    for (const auto& k : order_) {
        if (section.empty()) {
            if (k.find('.') == std::string::npos) out.push_back(k);
        } else if (k.rfind(prefix, 0) == 0) {
            out.push_back(k.substr(prefix.size()));
        }
    }
    return out;
}

void KeyValueDocument::reject_unused() const {
    for (const auto& k : order_) {
        if (!entries_.at(k).used) fail(k, "unknown key");
    }
}

}  // namespace mapoi
