#include "phishforge/encoding.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>

namespace phishforge::encoding {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// "utf8" and "utf-8" both appear in the wild.
std::string normalize_charset(std::string_view name) {
    std::string out;
    for (char c : name) {
        if (c == '"' || c == '\'' || std::isspace(static_cast<unsigned char>(c))) continue;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::string charset_from_content_type(std::string_view content_type) {
    std::string ct = lower(content_type);
    auto pos = ct.find("charset=");
    if (pos == std::string::npos) return "";
    auto value = ct.substr(pos + 8);
    if (auto semi = value.find(';'); semi != std::string::npos) value.resize(semi);
    return normalize_charset(value);
}

// Scans the prefix for <meta charset=...> or the http-equiv content-type
// form. Good enough for transcoding decisions; the real parser runs later.
std::string charset_from_meta(std::string_view body) {
    std::string head = lower(body.substr(0, std::min<std::size_t>(body.size(), 1024)));
    auto pos = head.find("charset=");
    if (pos == std::string::npos) return "";
    auto value = head.substr(pos + 8);
    auto end = value.find_first_of("\"'>; ");
    if (value.starts_with('"') || value.starts_with('\'')) {
        end = value.find(value[0], 1);
        return normalize_charset(end == std::string::npos ? value.substr(1)
                                                          : value.substr(1, end - 1));
    }
    return normalize_charset(end == std::string::npos ? value : value.substr(0, end));
}

}  // namespace

bool is_valid_utf8(std::string_view bytes) {
    std::size_t i = 0;
    const auto n = bytes.size();
    while (i < n) {
        auto b0 = static_cast<std::uint8_t>(bytes[i]);
        std::size_t len;
        std::uint32_t cp;
        if (b0 < 0x80) {
            i += 1;
            continue;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1Fu;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0Fu;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07u;
        } else {
            return false;
        }
        if (i + len > n) return false;
        for (std::size_t k = 1; k < len; ++k) {
            auto b = static_cast<std::uint8_t>(bytes[i + k]);
            if ((b & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (b & 0x3Fu);
        }
        if (len == 2 && cp < 0x80) return false;
        if (len == 3 && cp < 0x800) return false;
        if (len == 4 && cp < 0x10000) return false;
        if (cp > 0x10FFFF) return false;
        if (cp >= 0xD800 && cp <= 0xDFFF) return false;
        i += len;
    }
    return true;
}

std::string latin1_to_utf8(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    for (char c : bytes) {
        auto b = static_cast<std::uint8_t>(c);
        if (b < 0x80) {
            out += static_cast<char>(b);
        } else {
            out += static_cast<char>(0xC0 | (b >> 6));
            out += static_cast<char>(0x80 | (b & 0x3F));
        }
    }
    return out;
}

std::string sniff_charset(std::string_view body, std::string_view content_type) {
    if (auto cs = charset_from_content_type(content_type); !cs.empty()) return cs;
    return charset_from_meta(body);
}

std::string to_utf8(std::string_view body, std::string_view declared_charset) {
    std::string cs = normalize_charset(declared_charset);
    if (cs == "utf-8" || cs == "utf8" || cs == "us-ascii" || cs == "ascii") {
        if (is_valid_utf8(body)) return std::string(body);
        return latin1_to_utf8(body);  // declared UTF-8 but lied
    }
    if (cs == "iso-8859-1" || cs == "latin1" || cs == "latin-1" || cs == "windows-1252" ||
        cs == "cp1252") {
        // windows-1252 treated as latin-1: the 0x80-0x9F block maps to the
        // same byte values as code points, which preserves bytes without a
        // full cp1252 table.
        return latin1_to_utf8(body);
    }
    if (is_valid_utf8(body)) return std::string(body);
    return latin1_to_utf8(body);
}

}  // namespace phishforge::encoding
